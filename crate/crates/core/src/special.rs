//! Special functions used throughout the crate: the standard normal
//! distribution, gamma and beta functions, and the regularized incomplete
//! gamma and beta functions together with their inverses.
//!
//! The inverses take a probability *and* its complement so that callers
//! working in a far tail can hand over `q = 1 - p` without having formed
//! `1 - q` in floating point. Roots are found in log coordinates, which keeps
//! them accurate down to probabilities near the smallest normal `f64`.

use std::f64::consts::FRAC_1_SQRT_2;

/// `ln(sqrt(2 pi))`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
/// `sqrt(2 pi)`
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Standard normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal distribution function.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal survival function `1 - Phi(x)`, accurate in the upper tail.
#[inline]
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Standard normal quantile function.
///
/// Acklam's rational approximation polished by two Halley steps against
/// `erfc`; relative accuracy is close to machine precision down to the
/// smallest positive normal probability.
pub fn norm_quantile(p: f64) -> f64 {
    if p.is_nan() {
        return f64::NAN;
    }
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p > 0.5 {
        // 1 - p is exact here.
        -norm_quantile_lower(1.0 - p)
    } else {
        norm_quantile_lower(p)
    }
}

/// Quantile for `p <= 1/2`.
fn norm_quantile_lower(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];

    let mut x = if p < 0.024_25 {
        let r = (-2.0 * p.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };

    for _ in 0..2 {
        let dens = norm_pdf(x);
        if dens == 0.0 {
            break;
        }
        let u = (norm_cdf(x) - p) / dens;
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// Upper-tail normal quantile `Phi^{-1}(1 - q)` for `q` in `(0, 1)`.
#[inline]
pub fn norm_quantile_upper(q: f64) -> f64 {
    -norm_quantile(q)
}

/// `ln Gamma(x)` for `x > 0`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Gamma(x)`.
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln B(a, b)`.
#[inline]
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

const FPMIN: f64 = 1e-300;
const CF_EPS: f64 = 1e-16;
const CF_MAXIT: usize = 20_000;

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAXIT {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `ln I_x(a, b)` given both `x` and `y = 1 - x`.
fn ln_beta_reg_xy(x: f64, y: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    ln_beta_reg_parts(x.ln(), x, y, a, b)
}

/// `ln I_x(a, b)` from `ln x`, `x` and `y = 1 - x`; `ln x` stays meaningful
/// after `x` underflows.
pub fn ln_beta_reg_parts(ln_x: f64, x: f64, y: f64, a: f64, b: f64) -> f64 {
    if ln_x == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if y <= 0.0 {
        return 0.0;
    }
    let lnb = ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        a * ln_x + b * y.ln() - lnb - a.ln() + beta_cf(x, a, b).ln()
    } else {
        let ln_comp = a * ln_x + b * y.ln() - lnb - b.ln() + beta_cf(y, b, a).ln();
        (-ln_comp.exp()).ln_1p()
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn beta_reg(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    ln_beta_reg_xy(x, 1.0 - x, a, b).exp()
}

/// Natural log of `I_x(a, b)`; finite even when the value underflows.
pub fn ln_beta_reg(x: f64, a: f64, b: f64) -> f64 {
    if x >= 1.0 {
        return 0.0;
    }
    ln_beta_reg_xy(x, 1.0 - x, a, b)
}

/// Root of `I_x(a, b) = p`, reported as `x`, `1 - x` and `ln x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRoot {
    pub x: f64,
    /// `1 - x`, computed without cancellation when `x` is close to one.
    pub y: f64,
    /// `ln x`, finite even when `x` underflows.
    pub ln_x: f64,
    /// `ln y`, finite even when `y` underflows.
    pub ln_y: f64,
}

/// Inverse of the regularized incomplete beta function.
///
/// `p` and `q` must satisfy `p + q = 1`; whichever is smaller drives the
/// solve so that tail probabilities keep their relative precision.
pub fn beta_reg_inv(p: f64, q: f64, a: f64, b: f64) -> BetaRoot {
    if p <= 0.0 {
        return BetaRoot {
            x: 0.0,
            y: 1.0,
            ln_x: f64::NEG_INFINITY,
            ln_y: 0.0,
        };
    }
    if q <= 0.0 {
        return BetaRoot {
            x: 1.0,
            y: 0.0,
            ln_x: 0.0,
            ln_y: f64::NEG_INFINITY,
        };
    }
    if p <= q {
        let ln_x = beta_small_side(p, a, b);
        let x = ln_x.exp();
        BetaRoot {
            x,
            y: -ln_x.exp_m1(),
            ln_x,
            ln_y: (-x).ln_1p(),
        }
    } else {
        let ln_y = beta_small_side(q, b, a);
        let y = ln_y.exp();
        BetaRoot {
            x: -ln_y.exp_m1(),
            y,
            ln_x: (-y).ln_1p(),
            ln_y,
        }
    }
}

/// Solves `ln I_{e^t}(a, b) = ln p` for `t <= 0`.
fn beta_small_side(p: f64, a: f64, b: f64) -> f64 {
    let ln_p = p.ln();
    let lnb = ln_beta(a, b);
    let eval = |t: f64| {
        let x = t.exp();
        let y = -t.exp_m1();
        let ln_i = ln_beta_reg_parts(t, x, y, a, b);
        let slope = (a * t + (b - 1.0) * y.ln() - lnb - ln_i).exp();
        (ln_i - ln_p, slope)
    };
    // I_x ~ x^a / (a B(a, b)) for small x.
    let guess = ((ln_p + a.ln() + lnb) / a).min(-1e-3);
    let mut lo = guess - 1.0;
    let mut step = 1.0;
    while eval(lo).0 >= 0.0 {
        step *= 2.0;
        lo -= step;
        if lo < -1e7 {
            return lo;
        }
    }
    solve_increasing(eval, lo, 0.0, guess)
}

/// Lower regularized incomplete gamma function `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    ln_gamma_p(a, x).exp()
}

/// Upper regularized incomplete gamma function `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    ln_gamma_q(a, x).exp()
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..CF_MAXIT {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * CF_EPS {
            break;
        }
    }
    sum
}

fn gamma_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=CF_MAXIT {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `ln P(a, x)`.
pub fn ln_gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    ln_gamma_p_core(a, x.ln(), x)
}

/// `ln P(a, x)` from `ln x`, which stays meaningful after `x` underflows.
fn ln_gamma_p_core(a: f64, ln_x: f64, x: f64) -> f64 {
    if ln_x == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x < a + 1.0 {
        a * ln_x - x - ln_gamma(a) + gamma_series(a, x).ln()
    } else {
        (-ln_gamma_q(a, x).exp()).ln_1p()
    }
}

/// `ln Q(a, x)`; finite far beyond the point where `Q` underflows.
pub fn ln_gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::NEG_INFINITY;
    }
    if x < a + 1.0 {
        (-ln_gamma_p(a, x).exp()).ln_1p()
    } else {
        a * x.ln() - x - ln_gamma(a) + gamma_cf(a, x).ln()
    }
}

/// Inverse of the incomplete gamma function: the `x` with `P(a, x) = p`,
/// where `q = 1 - p` is supplied separately.
pub fn gamma_inv(p: f64, q: f64, a: f64) -> f64 {
    ln_gamma_inv(p, q, a).exp()
}

/// `ln` of [`gamma_inv`], finite even when the root underflows.
pub fn ln_gamma_inv(p: f64, q: f64, a: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if q <= 0.0 {
        return f64::INFINITY;
    }
    let lng = ln_gamma(a);
    if p <= q {
        // Solve ln P(a, e^s) = ln p in s = ln x.
        let ln_p = p.ln();
        let eval = |s: f64| {
            let x = s.exp();
            let ln_pv = ln_gamma_p_core(a, s, x);
            let slope = (a * s - x - lng - ln_pv).exp();
            (ln_pv - ln_p, slope)
        };
        let guess = (ln_p + ln_gamma(a + 1.0)) / a;
        let (mut lo, mut hi) = (guess.min(0.0) - 1.0, guess.max(0.0) + 1.0);
        let mut step = 1.0;
        while eval(lo).0 >= 0.0 {
            step *= 2.0;
            lo -= step;
            if lo < -1e7 {
                return f64::NEG_INFINITY;
            }
        }
        step = 1.0;
        while eval(hi).0 <= 0.0 {
            step *= 2.0;
            hi += step;
        }
        solve_increasing(eval, lo, hi, guess)
    } else {
        // Solve -ln Q(a, x) = -ln q, increasing in x.
        let ln_q = q.ln();
        let eval = |x: f64| {
            let ln_qv = ln_gamma_q(a, x);
            let slope = ((a - 1.0) * x.ln() - x - lng - ln_qv).exp();
            (ln_q - ln_qv, slope)
        };
        let mut guess = (-ln_q).max(a);
        for _ in 0..4 {
            guess = (-ln_q + (a - 1.0) * guess.ln() - lng).max(1e-3);
        }
        let mut hi = guess.max(a + 1.0) * 2.0;
        while eval(hi).0 <= 0.0 {
            hi *= 2.0;
        }
        solve_increasing(eval, 0.0, hi, guess).ln()
    }
}

/// Safeguarded Newton iteration for an increasing function on `[lo, hi]`
/// with `f(lo) < 0 < f(hi)`; `eval` returns the value and its derivative.
pub(crate) fn solve_increasing(
    eval: impl Fn(f64) -> (f64, f64),
    mut lo: f64,
    mut hi: f64,
    start: f64,
) -> f64 {
    let mut x = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    let mut last_step = hi - lo;
    for _ in 0..300 {
        let (fx, dfx) = eval(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if newton.is_finite()
            && newton > lo
            && newton < hi
            && (newton - x).abs() < 0.5 * last_step.abs().max(f64::MIN_POSITIVE)
        {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = next - x;
        x = next;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) || hi - lo <= 0.0 {
            break;
        }
        last_step = step;
        if (hi - lo) <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
    }
    x
}
