//! Log-gamma via the Lanczos approximation (g = 7, nine terms) with the
//! reflection formula below 0.5. Relative accuracy is around 1e-15 over the
//! supported argument range, well inside the 1e-12 needed by the GGD
//! moment relations.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest argument accepted by [`log_gamma`].
pub const LOG_GAMMA_MIN: f64 = 0.05;
/// Largest argument accepted by [`log_gamma`].
pub const LOG_GAMMA_MAX: f64 = 400.0;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// 0.5·ln(2π)
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x` in `[0.05, 400]`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(LOG_GAMMA_MIN..=LOG_GAMMA_MAX).contains(&x) {
        return Err(Error::arg(format!(
            "log_gamma argument {x} outside [{LOG_GAMMA_MIN}, {LOG_GAMMA_MAX}]"
        )));
    }
    Ok(ln_gamma(x))
}

/// Unchecked `ln Γ(x)` for any `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// `Γ(x)` for `x > 0` through the log form.
#[cfg(test)]
pub(crate) fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}
