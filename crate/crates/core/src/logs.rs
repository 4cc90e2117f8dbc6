//! Clamped iterated logarithms.
//!
//! `log_1 x = max(1, ln x)` and `log_ℓ x = log_1(log_{ℓ-1} x)`. All
//! logarithms in the crate are natural; `log_2` means `log log`, never a
//! base-2 logarithm.

/// `log_1 x = max(1, ln x)`.
#[inline]
pub fn log1(x: f64) -> f64 {
    if x <= std::f64::consts::E {
        1.0
    } else {
        x.ln()
    }
}

/// `log_ℓ x` for `ℓ ≥ 1`. `ℓ = 0` returns `x` itself.
pub fn iterated_log(ell: u32, x: f64) -> f64 {
    let mut y = x;
    for _ in 0..ell {
        y = log1(y);
    }
    y
}

/// `log_2 x`.
#[inline]
pub fn log2(x: f64) -> f64 {
    iterated_log(2, x)
}

/// `log_3 x`.
#[inline]
pub fn log3(x: f64) -> f64 {
    iterated_log(3, x)
}

/// `log_ℓ t` expressed through `u = ln ln t`, valid for every `t > 1`.
///
/// Keeps the tail of the convergence integral representable when `t` itself
/// overflows `f64`.
pub fn iterated_log_from_loglog(ell: u32, u: f64) -> f64 {
    match ell {
        0 => u.exp().exp(),
        1 => u.exp().max(1.0),
        _ => {
            let mut y = u.max(1.0);
            for _ in 2..ell {
                y = log1(y);
            }
            y
        }
    }
}
