//! Quadrature on `(0, 1)` and the efficiency integrals
//!
//! * `K(J)      = int J(u)^2 du`
//! * `K(J, f)   = int J(u) phi_f(F^{-1}(u)) du = int J'(u) f(F^{-1}(u)) du`
//! * `Jm(J, f)  = int J(u) F^{-1}(u) du`
//!
//! Every integrand here is symmetric about `u = 1/2`, so each integral is
//! twice the integral over the upper half, written in `q = 1 - u` and then in
//! `s = -ln q`. The substitution spreads the tail `u -> 1` over a long but
//! smooth interval, which the adaptive rule handles without clipping `u`.

use crate::densities::Density;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, QuadResult, Tolerance, DEFAULT_MAX_PANELS};
use crate::scores::{Score, ScoreKind};

/// Default tolerance for the efficiency integrals.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Upper end of the `s = -ln q` range; `q = e^{-S_MAX}` is about `1e-304`.
const S_MAX: f64 = 700.0;

/// Smallest `u` reached near 0 by [`integrate_unit`].
const U_FLOOR: f64 = 1e-300;
/// Largest `u` reached near 1 by [`integrate_unit`]; `u` is clipped here.
const U_CEIL: f64 = 1.0 - 1e-15;

/// Adaptive quadrature of `g` over `(0, 1)`.
///
/// The interval is split at `1/2` and at `breakpoints`. The end segments are
/// mapped exponentially (`u = c e^{-s}` near 0, `u = 1 - d e^{-s}` near 1) so
/// that no node falls on an endpoint and integrable endpoint singularities
/// are resolved geometrically. Near 1 the map stops at `1 - 1e-15`.
pub fn integrate_unit(g: impl Fn(f64) -> f64, tol: f64, breakpoints: &[f64]) -> QuadResult {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| *b > 0.0 && *b < 1.0)
        .chain([0.5])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let first = cuts[0];
    let last = cuts[cuts.len() - 1];
    // Tolerance is shared evenly over the segments.
    let pieces = cuts.len() + 1;
    let seg_tol = Tolerance::mixed(tol / pieces as f64);

    let left = adaptive(
        |s: f64| {
            let u = first * (-s).exp();
            g(u) * u
        },
        &[0.0, 1.0, (first / U_FLOOR).ln()],
        seg_tol,
        DEFAULT_MAX_PANELS,
    );
    let d = 1.0 - last;
    let right = adaptive(
        |s: f64| {
            let w = d * (-s).exp();
            g((1.0 - w).min(U_CEIL)) * w
        },
        &[0.0, 1.0, (d / (1.0 - U_CEIL)).ln().max(1.0)],
        seg_tol,
        DEFAULT_MAX_PANELS,
    );
    let mut total = left.plus(right);
    for w in cuts.windows(2) {
        total = total.plus(adaptive(&g, w, seg_tol, DEFAULT_MAX_PANELS));
    }
    total.converged = total.converged && total.abs_err <= tol * total.value.abs().max(1.0);
    total
}

/// `2 int_0^{1/2} h(q) dq` to relative accuracy `tol`, integrated in `s = -ln q` with breaks at the
/// given `q` values.
pub(crate) fn upper_half(h: impl Fn(f64) -> f64, tol: f64, q_breaks: &[f64]) -> QuadResult {
    let mut cuts = vec![std::f64::consts::LN_2, S_MAX];
    for &q in q_breaks {
        if q > 0.0 && q < 0.5 {
            let s = -q.ln();
            if s < S_MAX {
                cuts.push(s);
            }
        }
    }
    // Early cuts help the rule find the bulk before the long tail.
    cuts.extend([2.0, 5.0, 12.0, 40.0, 150.0]);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let r = adaptive(
        |s: f64| {
            let q = (-s).exp();
            let v = h(q);
            if v == 0.0 {
                0.0
            } else {
                v * q
            }
        },
        &cuts,
        Tolerance { abs: 1e-300, rel: 0.5 * tol },
        DEFAULT_MAX_PANELS * 2,
    );
    r.scaled(2.0)
}

fn require_converged(r: QuadResult) -> Result<QuadResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NonConvergence {
            value: r.value,
            abs_err: r.abs_err,
            subdivisions: r.subdivisions,
        })
    }
}

/// Breakpoints in `q` at which `f(F^{-1}(1 - q))` is discontinuous.
fn density_breaks(f: &Density) -> Vec<f64> {
    match f.family() {
        crate::densities::Family::HodgesLehmann { eps, .. } => {
            vec![crate::special::norm_sf(*eps)]
        }
        _ => Vec::new(),
    }
}

/// `K(J)` by quadrature of `J^2`; a check on the closed forms.
pub fn k_of_j_quadrature(j: &Score, tol: f64) -> Result<QuadResult> {
    let r = upper_half(
        |q| {
            let v = j.tail_eval(q).0;
            v * v
        },
        tol,
        &[],
    );
    require_converged(r)
}

/// `K(J, f)` in the integration-by-parts form `int J'(u) f(F^{-1}(u)) du`.
///
/// This form stays valid for densities with jumps, where the location score
/// misses the jump contribution. The Hodges–Lehmann jump point is passed to
/// the integrator as a breakpoint.
pub fn cross_info(j: &Score, f: &Density, tol: f64) -> Result<QuadResult> {
    let breaks = density_breaks(f);
    let r = upper_half(
        |q| {
            let d = j.tail_eval(q).1;
            let p = f.tail_point(q).pdf;
            if p == 0.0 {
                0.0
            } else {
                d * p
            }
        },
        tol,
        &breaks,
    );
    if !r.value.is_finite() {
        return Err(Error::Divergence(format!("K({j}, {f}) is not finite")));
    }
    require_converged(r)
}

/// `K(J, f)` in the direct form `int J(u) phi_f(F^{-1}(u)) du`.
///
/// Only meaningful for densities without jumps.
pub fn cross_info_direct(j: &Score, f: &Density, tol: f64) -> Result<QuadResult> {
    if f.flags().has_density_jump {
        return Err(Error::Precondition(format!(
            "{f} has a density jump; use the integration-by-parts form"
        )));
    }
    let r = upper_half(
        |q| {
            let v = j.tail_eval(q).0;
            if v == 0.0 {
                0.0
            } else {
                v * f.tail_point(q).score
            }
        },
        tol,
        &[],
    );
    require_converged(r)
}

/// Exponent `b` with `J(1 - q)` decaying like `q^b` as `q -> 0` (zero when
/// `J` does not vanish at 1).
pub fn score_tail_decay(j: &Score) -> f64 {
    match j.kind() {
        ScoreKind::Cauchy => 1.0,
        ScoreKind::Student { nu } => 1.0 / nu,
        ScoreKind::FromDensity(g) => match g.family() {
            crate::densities::Family::StudentT { nu } => 1.0 / nu,
            crate::densities::Family::Cauchy => 1.0,
            _ => 0.0,
        },
        ScoreKind::Wilcoxon | ScoreKind::VanDerWaerden => 0.0,
    }
}

/// `Jm(J, f) = int J(u) F^{-1}(u) du`.
///
/// Convergence is decided from tail exponents: with `F^{-1}(1 - q) ~ q^{-g}`
/// and `J(1 - q) ~ q^{b}`, the integral converges iff `g - b < 1`.
pub fn cross_moment(j: &Score, f: &Density, tol: f64) -> Result<QuadResult> {
    let g = f.quantile_tail_exponent();
    let b = score_tail_decay(j);
    let power = b - g;
    if power <= -1.0 {
        return Err(Error::Divergence(format!(
            "int J F^-1 diverges for {j} under {f} (quantile tail exponent {g}, score decay {b})"
        )));
    }
    let h = |q: f64| {
        let v = j.tail_eval(q).0;
        if v == 0.0 {
            0.0
        } else {
            v * f.tail_point(q).x
        }
    };
    let mut r = upper_half(h, tol, &density_breaks(f));
    // The part below q = e^{-S_MAX}, treating the integrand as a pure power.
    let q0 = (-S_MAX).exp();
    let tail = 2.0 * h(q0) * q0 / (power + 1.0);
    if tail.is_finite() {
        r.value += tail;
        r.abs_err += tail.abs();
    }
    if !r.value.is_finite() {
        return Err(Error::Divergence(format!("int J F^-1 is not finite for {j} under {f}")));
    }
    require_converged(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{norm_quantile, norm_sf};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrate_unit_examples() {
        let r = integrate_unit(|_| 1.0, 1e-12, &[]);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-14);
        let r = integrate_unit(|u| norm_quantile(u).powi(2), 1e-10, &[]);
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
        let r = integrate_unit(|u| 0.5 / u.sqrt(), 1e-10, &[]);
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
        let r = integrate_unit(|u| if u < 0.3 { 1.0 } else { 2.0 }, 1e-12, &[0.3]);
        assert_abs_diff_eq!(r.value, 1.7, epsilon = 1e-12);
    }

    #[test]
    fn cross_info_examples() {
        let g = Density::gaussian();
        let w = cross_info(&Score::wilcoxon(), &g, 1e-10).unwrap();
        assert_abs_diff_eq!(w.value, 0.5 / PI.sqrt(), epsilon = 1e-10);
        let v = cross_info(&Score::van_der_waerden(), &g, 1e-10).unwrap();
        assert_abs_diff_eq!(v.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn cross_info_jump_handling() {
        for &a in &[0.5, 0.1] {
            for &eps in &[0.3, 1.0, 2.5] {
                let f = Density::hodges_lehmann(a, eps).unwrap();
                let r = cross_info(&Score::van_der_waerden(), &f, 1e-11).unwrap();
                let tail = norm_sf(eps);
                let want = (1.0 - 2.0 * tail) + 2.0 * a * tail;
                assert_abs_diff_eq!(r.value, want, epsilon = 1e-9);
            }
        }
        let f = Density::hodges_lehmann(0.5, 1.0).unwrap();
        assert!(matches!(
            cross_info_direct(&Score::wilcoxon(), &f, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cross_moment_examples() {
        let g = Density::gaussian();
        let w = cross_moment(&Score::wilcoxon(), &g, 1e-10).unwrap();
        assert_abs_diff_eq!(w.value, 0.5 / PI.sqrt(), epsilon = 1e-10);
        let v = cross_moment(&Score::van_der_waerden(), &g, 1e-10).unwrap();
        assert_abs_diff_eq!(v.value, 1.0, epsilon = 1e-10);
        let c = Density::student(1.0).unwrap();
        assert!(matches!(
            cross_moment(&Score::wilcoxon(), &c, 1e-9),
            Err(Error::Divergence(_))
        ));
        assert!(matches!(
            cross_moment(&Score::van_der_waerden(), &Density::cauchy(), 1e-9),
            Err(Error::Divergence(_))
        ));
        // The Cauchy score tames Cauchy tails.
        assert!(cross_moment(&Score::cauchy(), &Density::cauchy(), 1e-9).is_ok());
    }

    #[test]
    fn laplace_wilcoxon_moment_is_three_eighths() {
        // int (u - 1/2) F^{-1}(u) du for the Laplace law equals 3/8.
        let f = Density::power_exp(1.0).unwrap();
        let r = cross_moment(&Score::wilcoxon(), &f, 1e-11).unwrap();
        assert_abs_diff_eq!(r.value, 0.375, epsilon = 1e-10);
    }

    #[test]
    fn cross_moment_matches_x_domain_integral() {
        // Independent route: int J(F(x)) x f(x) dx over the real line.
        let f = Density::student(4.0).unwrap();
        let j = Score::van_der_waerden();
        let x_form = crate::quadrature::half_line(
            |x| j.eval(f.cdf(x).min(1.0 - 1e-16)).unwrap() * x * f.pdf(x),
            0.0,
            Tolerance::mixed(1e-12),
        );
        let u_form = cross_moment(&j, &f, 1e-11).unwrap();
        assert_abs_diff_eq!(2.0 * x_form.value, u_form.value, epsilon = 1e-8);
    }
}
