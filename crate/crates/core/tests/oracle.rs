use prnn::cli::{generate_paths, PathKind};
use prnn::config::KeyValues;
use prnn::constitutive::{czm_update, CohesiveState, CzmProps};
use prnn::loadpaths::{proportional_path, MagnitudeFn, ProportionalConfig, Provenance, StrainPath};
use prnn::network::forward_path;
use prnn::oracle::{gen_dataset, teacher_build, teacher_respond, TeacherConfig};

fn teacher() -> prnn::oracle::Teacher {
    teacher_build(&TeacherConfig::default()).unwrap()
}

#[test]
fn teacher_damage_is_monotone_per_point() {
    let t = teacher();
    let paths = generate_paths(PathKind::Gp, 6, 0, 11, None, &KeyValues::default()).unwrap();
    let data = gen_dataset(&paths, &t).unwrap();
    for p in &data.paths {
        let d = p.damage.as_ref().unwrap();
        for w in d.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                assert!(b >= a);
            }
        }
    }
}

/// Work of the tractions minus the energy still stored in the secant spring.
fn dissipated(jumps: &[[f64; 2]], props: &CzmProps) -> f64 {
    let mut state = CohesiveState::default();
    let mut work = 0.0;
    let mut prev_jump = [0.0, 0.0];
    let mut prev_t = [0.0, 0.0];
    for j in jumps {
        let n = 200;
        for i in 1..=n {
            let a = i as f64 / n as f64;
            let x = [prev_jump[0] + a * (j[0] - prev_jump[0]), prev_jump[1] + a * (j[1] - prev_jump[1])];
            let (t, next) = czm_update(&x, &state, props).unwrap();
            let xm = [prev_jump[0] + (a - 1.0 / n as f64) * (j[0] - prev_jump[0]), prev_jump[1] + (a - 1.0 / n as f64) * (j[1] - prev_jump[1])];
            work += 0.5 * ((t[0] + prev_t[0]) * (x[0] - xm[0]) + (t[1] + prev_t[1]) * (x[1] - xm[1]));
            prev_t = t;
            state = next;
        }
        prev_jump = *j;
    }
    let stored = 0.5 * (prev_t[0] * prev_jump[0] + prev_t[1] * prev_jump[1]);
    work - stored
}

#[test]
fn dissipated_cohesive_energy_stays_below_the_critical_energy() {
    let t = teacher();
    let props = t.config.materials.cohesive;
    let mut paths: Vec<StrainPath> = generate_paths(PathKind::Gp, 3, 0, 12, Some(40), &KeyValues::default()).unwrap();
    for cycles in 0..=2 {
        let cfg = ProportionalConfig::new([0.8, 0.0, 0.6], MagnitudeFn::from_cycles(cycles).unwrap(), 30);
        paths.push(proportional_path(&cfg, Provenance::ProportionalRandom, 0).unwrap());
    }
    let g_max = props.g_ic.max(props.g_iic);
    for p in &paths {
        for k in 0..t.n_cohesive() {
            let m = t.jump_map(k);
            let jumps: Vec<[f64; 2]> = p
                .steps
                .iter()
                .map(|e| {
                    [
                        m[0][0] * e[0] + m[0][1] * e[1] + m[0][2] * e[2],
                        m[1][0] * e[0] + m[1][1] * e[1] + m[1][2] * e[2],
                    ]
                })
                .collect();
            let d = dissipated(&jumps, &props);
            assert!(d >= -1e-9 && d <= g_max * 1.01, "point {k}: dissipated {d} N/mm");
        }
    }
}

#[test]
fn mode_one_separation_dissipates_exactly_g_ic() {
    let props = CzmProps::default();
    let df = props.normal_final_jump();
    let d = dissipated(&[[2.0 * props.normal_onset_jump(), 0.0], [1.2 * df, 0.0]], &props);
    assert!((d - props.g_ic).abs() < 1e-3 * props.g_ic, "{d}");
}

#[test]
fn zero_path_gives_zero_stress() {
    let t = teacher();
    let p = StrainPath {
        steps: vec![[0.0; 3]; 10],
        provenance: Provenance::Gp,
        seed: 0,
        config: String::new(),
    };
    let r = teacher_respond(&p, &t).unwrap();
    assert!(r.stresses.iter().flatten().all(|v| *v == 0.0));
}

#[test]
fn teacher_network_form_reproduces_the_teacher() {
    let t = teacher();
    let paths = generate_paths(PathKind::PropRand, 3, 1, 13, None, &KeyValues::default()).unwrap();
    let params = t.as_network_params().unwrap();
    for p in &paths {
        let direct = teacher_respond(p, &t).unwrap();
        let net = forward_path(&p.steps, &params).unwrap();
        for (a, b) in direct.stresses.iter().zip(&net.stresses) {
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() <= 1e-9 * a[i].abs().max(1.0), "{a:?} vs {b:?}");
            }
        }
    }
}

#[test]
fn one_cycle_unloading_is_softer_than_loading() {
    let t = teacher();
    let cfg = ProportionalConfig::new([1.0, 0.0, 0.0], MagnitudeFn::OneCycle, 30);
    let p = proportional_path(&cfg, Provenance::ProportionalFundamental, 0).unwrap();
    let s = teacher_respond(&p, &t).unwrap().stresses;
    let initial = s[0][0] / p.steps[0][0];
    let unload = (s[14][0] - s[19][0]) / (p.steps[14][0] - p.steps[19][0]);
    assert!(unload < 0.9 * initial, "unload {unload} vs initial {initial}");
}
