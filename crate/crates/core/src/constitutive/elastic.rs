use crate::error::{Error, Result};
use crate::linalg::Vec3;

use super::BulkProps;

/// Plane-stress stiffness for engineering shear strain.
pub fn plane_stress_stiffness(props: &BulkProps) -> [[f64; 3]; 3] {
    let e = props.youngs_modulus;
    let nu = props.poisson_ratio;
    let f = e / (1.0 - nu * nu);
    [
        [f, f * nu, 0.0],
        [f * nu, f, 0.0],
        [0.0, 0.0, f * 0.5 * (1.0 - nu)],
    ]
}

#[inline]
pub(crate) fn apply_stiffness(c: &[[f64; 3]; 3], e: &Vec3) -> Vec3 {
    [
        c[0][0] * e[0] + c[0][1] * e[1],
        c[1][0] * e[0] + c[1][1] * e[1],
        c[2][2] * e[2],
    ]
}

/// Linear elastic stress for a strain; stateless.
pub fn elastic_update(strain: &Vec3, props: &BulkProps) -> Result<Vec3> {
    if !strain.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite(format!("strain {strain:?}")));
    }
    Ok(apply_stiffness(&plane_stress_stiffness(props), strain))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_strain_gives_zero_stress() {
        let s = elastic_update(&[0.0; 3], &BulkProps::default()).unwrap();
        assert_eq!(s, [0.0; 3]);
    }

    #[test]
    fn zero_poisson_decouples() {
        let p = BulkProps::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let s = elastic_update(&[0.01, 0.0, 0.0], &p).unwrap();
        assert_eq!(s, [0.01, 0.0, 0.0]);
    }

    #[test]
    fn matches_dense_matvec_oracle() {
        // Dense C·ε assembled independently (numpy) for E=3130, ν=0.37.
        let expected = [3.894820994091067, 2.067083767813695, 0.5711678832116789];
        let p = BulkProps::new(3130.0, 0.37, 64.8, 100.0).unwrap();
        let s = elastic_update(&[1e-3, 2e-4, 5e-4], &p).unwrap();
        for i in 0..3 {
            assert!((s[i] - expected[i]).abs() <= 1e-14 * expected[i].abs(), "{i}");
        }
    }

    #[test]
    fn rejects_nan() {
        assert!(elastic_update(&[f64::NAN, 0.0, 0.0], &BulkProps::default()).is_err());
    }
}
