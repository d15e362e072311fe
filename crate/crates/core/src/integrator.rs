//! Embedded Dormand-Prince 5(4) integrator for `dX/dt = f(X)` on complex
//! matrices, with error control in the max norm.

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

#[rustfmt::skip]
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

// Fifth-order weights; equal to the last row of A.
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];

// B5 minus the embedded fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl DormandPrince {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol, max_steps: 10_000_000 }
    }

    /// Integrates from `(t0, y0)` and returns the state at every time in
    /// `outputs`, which must be ascending and not before `t0`. Steps are
    /// clipped to land exactly on each output time.
    pub fn integrate<F>(&self, f: F, t0: f64, y0: &ComplexMatrix, outputs: &[f64]) -> Result<Vec<ComplexMatrix>>
    where
        F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    {
        let mut t = t0;
        let mut y = y0.clone();
        let mut k1 = f(&y)?;
        let mut h = initial_step(&y, &k1, self.rtol, self.atol);
        let mut out = Vec::with_capacity(outputs.len());
        let mut steps = 0usize;

        for &target in outputs {
            if target < t {
                return Err(Error::InvalidArgument(format!("output time {target} precedes current time {t}")));
            }
            while t < target {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::StepUnderflow { t });
                }
                let remaining = target - t;
                let last = h >= remaining;
                let step = if last { remaining } else { h };
                if step <= 1e-14 * t.abs().max(1.0) && !last {
                    return Err(Error::StepUnderflow { t });
                }

                let mut k: Vec<ComplexMatrix> = Vec::with_capacity(7);
                k.push(k1.clone());
                for row in A.iter().skip(1) {
                    let mut ys = y.clone();
                    for (prev, kp) in k.iter().enumerate() {
                        let a = row[prev];
                        if a != 0.0 {
                            ys += kp.scale(a * step);
                        }
                    }
                    k.push(f(&ys)?);
                }

                let mut y_new = y.clone();
                let mut err = ComplexMatrix::zeros(y.nrows(), y.ncols());
                for s in 0..7 {
                    if B5[s] != 0.0 {
                        y_new += k[s].scale(B5[s] * step);
                    }
                    if E[s] != 0.0 {
                        err += k[s].scale(E[s] * step);
                    }
                }

                let mut ratio = 0.0_f64;
                for ((e, a), b) in err.iter().zip(y.iter()).zip(y_new.iter()) {
                    let scale = self.atol + self.rtol * a.norm().max(b.norm());
                    ratio = ratio.max(e.norm() / scale);
                }

                let accepted = ratio <= 1.0;
                if accepted {
                    t = if last { target } else { t + step };
                    y = y_new;
                    k1 = k.swap_remove(6);
                }
                let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
                let proposed = step * factor;
                // A clipped step says little about the controller's step size.
                h = if last && accepted { h.max(proposed) } else { proposed };
                if h <= 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t });
                }
            }
            out.push(y.clone());
        }
        Ok(out)
    }
}

fn initial_step(y: &ComplexMatrix, dy: &ComplexMatrix, rtol: f64, atol: f64) -> f64 {
    let mut d0 = 0.0_f64;
    let mut d1 = 0.0_f64;
    for (a, b) in y.iter().zip(dy.iter()) {
        let scale = atol + rtol * a.norm();
        d0 = d0.max(a.norm() / scale);
        d1 = d1.max(b.norm() / scale);
    }
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        (0.01 * d0 / d1).min(1.0)
    }
}
