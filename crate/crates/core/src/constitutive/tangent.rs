//! Central finite-difference Jacobians of material updates.

use crate::error::Result;
use crate::linalg::Matrix;

/// Base relative step; the step on component `x` is `h·(1 + |x|)`.
pub const DEFAULT_FD_STEP: f64 = 1e-7;

#[inline]
pub fn fd_step_for(h: f64, x: f64) -> f64 {
    h * (1.0 + x.abs())
}

/// Step `h·(scale + |x|)` for a variable whose natural magnitude is `scale`.
#[inline]
pub fn fd_step_scaled(h: f64, x: f64, scale: f64) -> f64 {
    h * (scale + x.abs())
}

/// Jacobian `∂f/∂x` by central differences. Any internal state the update
/// depends on must be captured by `f` at its beginning-of-step value.
pub fn fd_tangent<F>(mut f: F, input: &[f64], h: f64) -> Result<Matrix>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let n_out = f(input)?.len();
    let mut jac = Matrix::zeros(n_out, input.len());
    let mut x = input.to_vec();
    for i in 0..input.len() {
        let step = fd_step_for(h, input[i]);
        x[i] = input[i] + step;
        let plus = f(&x)?;
        x[i] = input[i] - step;
        let minus = f(&x)?;
        x[i] = input[i];
        for r in 0..n_out {
            jac.set(r, i, (plus[r] - minus[r]) / (2.0 * step));
        }
    }
    Ok(jac)
}

/// Square central-difference Jacobian on fixed-size arrays, `jac[out][in]`,
/// with step `h·(scale[i] + |z[i]|)` on input `i`.
#[inline]
pub fn central_jacobian<const N: usize, F>(
    mut f: F,
    z: &[f64; N],
    h: f64,
    scale: &[f64; N],
) -> Result<[[f64; N]; N]>
where
    F: FnMut(&[f64; N]) -> Result<[f64; N]>,
{
    let mut jac = [[0.0; N]; N];
    let mut x = *z;
    for i in 0..N {
        let step = fd_step_scaled(h, z[i], scale[i]);
        x[i] = z[i] + step;
        let plus = f(&x)?;
        x[i] = z[i] - step;
        let minus = f(&x)?;
        x[i] = z[i];
        let inv = 1.0 / (2.0 * step);
        for r in 0..N {
            jac[r][i] = (plus[r] - minus[r]) * inv;
        }
    }
    Ok(jac)
}
