//! Leaky activations mapping encoded values to cohesive jumps. `w` and `b`
//! are the SoftPlus-mapped (positive) slope and threshold.

/// Partial derivatives of an activation with respect to `(x, w, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakyGrad {
    pub dx: f64,
    pub dw: f64,
    pub db: f64,
}

const LEAK: f64 = 0.01;

/// Normal component: slope `w` above the threshold `b`, `0.01·w` below.
pub fn leaky_normal(x: f64, w: f64, b: f64) -> (f64, LeakyGrad) {
    if x >= b {
        (
            w * (x - b),
            LeakyGrad {
                dx: w,
                dw: x - b,
                db: -w,
            },
        )
    } else {
        (
            LEAK * w * (x - b),
            LeakyGrad {
                dx: LEAK * w,
                dw: LEAK * (x - b),
                db: -LEAK * w,
            },
        )
    }
}

/// Shear component: odd three-branch form with a `0.01·w` slope inside `(−b, b)`.
pub fn leaky_shear(x: f64, w: f64, b: f64) -> (f64, LeakyGrad) {
    let shift = (1.0 - LEAK) * b;
    if x >= b {
        (
            w * (x - shift),
            LeakyGrad {
                dx: w,
                dw: x - shift,
                db: -(1.0 - LEAK) * w,
            },
        )
    } else if x <= -b {
        (
            w * (x + shift),
            LeakyGrad {
                dx: w,
                dw: x + shift,
                db: (1.0 - LEAK) * w,
            },
        )
    } else {
        (
            LEAK * w * x,
            LeakyGrad {
                dx: LEAK * w,
                dw: LEAK * x,
                db: 0.0,
            },
        )
    }
}
