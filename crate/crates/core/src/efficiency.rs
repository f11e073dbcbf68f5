//! Asymptotic relative efficiencies of rank tests and their closed-form
//! bounds.
//!
//! Nonserial (location) efficiency of the test with scores `J1` against the
//! one with scores `J2`:
//!
//! ```text
//! ARE = K(J2) / K(J1) * C^2,          C = K(J1, f) / K(J2, f)
//! ```
//!
//! Serial efficiency of the autocorrelation test with scores `(J1, J2)`
//! against the one with `(J3, J4)`:
//!
//! ```text
//! ARE* = K(J3)/K(J1) C^2(J1, J3) * K(J4)/K(J2) D^2(J2, J4),  D = Jm(J2, f) / Jm(J4, f)
//! ```

use std::f64::consts::PI;

use crate::densities::Density;
use crate::error::{domain, Error, Result};
use crate::functionals::{cross_info, cross_moment, DEFAULT_TOL};
use crate::quadrature::QuadResult;
use crate::scores::{golden_max, Score};
use crate::special::ln_gamma;

/// The pieces of an efficiency computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreReport {
    /// Ratio of the `K(J, f)` integrals of the two first scores.
    pub c_f: f64,
    /// Ratio of the `Jm(J, f)` integrals of the two second scores (serial only).
    pub d_f: Option<f64>,
    /// `K(J3) / K(J1)` (or `K(J2) / K(J1)` in the nonserial case).
    pub k_ratio_nonserial: f64,
    /// `K(J4) / K(J2)` (serial only).
    pub k_ratio_serial: Option<f64>,
    pub are: f64,
    /// First-order propagation of the quadrature error estimates.
    pub abs_err: f64,
    pub serial: bool,
    /// The density has infinite variance, so the serial efficiency is only
    /// a formal value.
    pub outside_f2: bool,
}

impl AreReport {
    /// Rejects a serial report computed under an infinite-variance density.
    pub fn require_f2(self) -> Result<Self> {
        if self.outside_f2 {
            Err(Error::OutsideF2(format!(
                "serial efficiency {} computed under an infinite-variance density",
                self.are
            )))
        } else {
            Ok(self)
        }
    }
}

fn rel_err(r: &QuadResult) -> f64 {
    if r.value == 0.0 {
        f64::INFINITY
    } else {
        r.abs_err / r.value.abs()
    }
}

fn k_of(j: &Score) -> Result<f64> {
    j.k_of_j()
}

/// Nonserial efficiency of scores `j1` relative to `j2` under `f`.
pub fn are_nonserial(j1: &Score, j2: &Score, f: &Density) -> Result<AreReport> {
    are_nonserial_tol(j1, j2, f, DEFAULT_TOL)
}

/// [`are_nonserial`] with an explicit quadrature tolerance.
pub fn are_nonserial_tol(j1: &Score, j2: &Score, f: &Density, tol: f64) -> Result<AreReport> {
    let k1 = cross_info(j1, f, tol)?;
    let k2 = cross_info(j2, f, tol)?;
    let c_f = k1.value / k2.value;
    let k_ratio = k_of(j2)? / k_of(j1)?;
    let are = k_ratio * c_f * c_f;
    Ok(AreReport {
        c_f,
        d_f: None,
        k_ratio_nonserial: k_ratio,
        k_ratio_serial: None,
        are,
        abs_err: are * 2.0 * (rel_err(&k1) + rel_err(&k2)),
        serial: false,
        outside_f2: false,
    })
}

/// Serial efficiency of the `(j1, j2)` autocorrelation test relative to the
/// `(j3, j4)` one under innovation density `f`.
///
/// The value is computed whenever the integrals converge; densities with
/// infinite variance are flagged through [`AreReport::outside_f2`].
pub fn are_serial(j1: &Score, j2: &Score, j3: &Score, j4: &Score, f: &Density) -> Result<AreReport> {
    are_serial_tol(j1, j2, j3, j4, f, DEFAULT_TOL)
}

/// [`are_serial`] with an explicit quadrature tolerance.
pub fn are_serial_tol(
    j1: &Score,
    j2: &Score,
    j3: &Score,
    j4: &Score,
    f: &Density,
    tol: f64,
) -> Result<AreReport> {
    let m2 = cross_moment(j2, f, tol)?;
    let m4 = cross_moment(j4, f, tol)?;
    let k1 = cross_info(j1, f, tol)?;
    let k3 = cross_info(j3, f, tol)?;
    let c_f = k1.value / k3.value;
    let d_f = m2.value / m4.value;
    let kr1 = k_of(j3)? / k_of(j1)?;
    let kr2 = k_of(j4)? / k_of(j2)?;
    let are = kr1 * c_f * c_f * kr2 * d_f * d_f;
    let rel = 2.0 * (rel_err(&k1) + rel_err(&k3) + rel_err(&m2) + rel_err(&m4));
    Ok(AreReport {
        c_f,
        d_f: Some(d_f),
        k_ratio_nonserial: kr1,
        k_ratio_serial: Some(kr2),
        are,
        abs_err: are * rel,
        serial: true,
        outside_f2: !f.flags().finite_variance,
    })
}

/// Quantities tabulated for the Wilcoxon / van der Waerden comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// `C_f(J_W, J_vdW)`.
    C,
    /// `D_f(J_W, J_vdW)`.
    D,
    /// Nonserial efficiency of Wilcoxon relative to van der Waerden.
    Are,
    /// Serial efficiency of Spearman–Wald–Wolfowitz relative to van der Waerden.
    AreSerial,
}

/// All four Wilcoxon / van der Waerden quantities under one density.
#[derive(Debug, Clone, PartialEq)]
pub struct WvdwRow {
    pub c: f64,
    pub d: Result<f64>,
    pub are: f64,
    pub are_serial: Result<f64>,
    pub outside_f2: bool,
}

impl WvdwRow {
    pub fn get(&self, q: Quantity) -> Result<f64> {
        match q {
            Quantity::C => Ok(self.c),
            Quantity::D => self.d.clone(),
            Quantity::Are => Ok(self.are),
            Quantity::AreSerial => self.are_serial.clone(),
        }
    }
}

/// Computes [`WvdwRow`] for `f`.
pub fn wilcoxon_vs_vdw(f: &Density, tol: f64) -> Result<WvdwRow> {
    let w = Score::wilcoxon();
    let v = Score::van_der_waerden();
    let kw = cross_info(&w, f, tol)?.value;
    let kv = cross_info(&v, f, tol)?.value;
    let c = kw / kv;
    let are = 12.0 * c * c;
    let d = match (cross_moment(&w, f, tol), cross_moment(&v, f, tol)) {
        (Ok(mw), Ok(mv)) => Ok(mw.value / mv.value),
        (Err(e), _) | (_, Err(e)) => Err(e),
    };
    let are_serial = d.clone().map(|d| 144.0 * c * c * d * d);
    Ok(WvdwRow {
        c,
        d,
        are,
        are_serial,
        outside_f2: !f.flags().finite_variance,
    })
}

/// Threshold on the difference between successive extrapolants.
pub const EXTRAPOLATION_THRESHOLD: f64 = 1e-3;
const HL_A: [f64; 3] = [1e-2, 1e-3, 1e-4];
const HL_EPS_ZERO: [f64; 2] = [1e-2, 1e-3];
const HL_TOL: f64 = 1e-12;

/// Linear-in-step Richardson extrapolation over steps shrinking by 10.
fn richardson(v: &[f64; 3]) -> Result<f64> {
    let r1 = (10.0 * v[1] - v[0]) / 9.0;
    let r2 = (10.0 * v[2] - v[1]) / 9.0;
    if !((r1 - r2).abs() <= EXTRAPOLATION_THRESHOLD) {
        return Err(Error::ExtrapolationUnstable {
            first: r1,
            second: r2,
            threshold: EXTRAPOLATION_THRESHOLD,
        });
    }
    Ok(r2)
}

fn hl_rows(eps: f64) -> Result<[WvdwRow; 3]> {
    let row = |a: f64| wilcoxon_vs_vdw(&Density::hodges_lehmann(a, eps)?, HL_TOL);
    Ok([row(HL_A[0])?, row(HL_A[1])?, row(HL_A[2])?])
}

fn extrapolate_rows(rows: &[WvdwRow; 3], quantity: Quantity) -> Result<f64> {
    richardson(&[rows[0].get(quantity)?, rows[1].get(quantity)?, rows[2].get(quantity)?])
}

/// `a -> 0` limits of the four integrals behind [`WvdwRow`] under the
/// Hodges–Lehmann density with parameter `eps`.
///
/// `K(J, f)` is affine in `a` and `a * Jm(J, f)` is affine in `a`, so linear
/// extrapolation of these components is exact up to rounding even when `a`
/// is not small against the central mass `2 Phi(eps) - 1`.
fn hl_component_limit(eps: f64) -> Result<WvdwRow> {
    let w = Score::wilcoxon();
    let v = Score::van_der_waerden();
    let mut comps = [[0.0; 4]; 3];
    for (slot, &a) in comps.iter_mut().zip(HL_A.iter()) {
        let f = Density::hodges_lehmann(a, eps)?;
        *slot = [
            cross_info(&w, &f, HL_TOL)?.value,
            cross_info(&v, &f, HL_TOL)?.value,
            a * cross_moment(&w, &f, HL_TOL)?.value,
            a * cross_moment(&v, &f, HL_TOL)?.value,
        ];
    }
    let mut lim = [0.0; 4];
    for (k, l) in lim.iter_mut().enumerate() {
        *l = richardson(&[comps[0][k], comps[1][k], comps[2][k]])?;
    }
    let c = lim[0] / lim[1];
    let d = lim[2] / lim[3];
    Ok(WvdwRow {
        c,
        d: Ok(d),
        are: 12.0 * c * c,
        are_serial: Ok(144.0 * c * c * d * d),
        outside_f2: true,
    })
}

/// Limit as `a -> 0` of a Wilcoxon / van der Waerden quantity under the
/// Hodges–Lehmann density with parameters `(a, eps)`.
///
/// For `eps > 0` the quantity is evaluated at `a = 1e-2, 1e-3, 1e-4` and
/// extrapolated linearly to `a = 0`. For `eps = 0` the result is the iterated
/// limit: the `a -> 0` limits at `eps = 1e-2` and `1e-3` are extrapolated to
/// `eps = 0` (linearly, as `D` has a first-order term in `eps`). At such
/// small `eps` the central mass is comparable to `a`, so the `a -> 0` step
/// extrapolates the underlying integrals rather than their ratios.
pub fn hl_limit(eps: f64, quantity: Quantity) -> Result<f64> {
    let [c, d, are, are_serial] = hl_limits(eps)?;
    match quantity {
        Quantity::C => c,
        Quantity::D => d,
        Quantity::Are => are,
        Quantity::AreSerial => are_serial,
    }
}

/// [`hl_limit`] for all four quantities at once, in the order `C`, `D`,
/// `Are`, `AreSerial`. The outer error is for an invalid `eps` or a failed
/// integral; extrapolation failures are reported per quantity.
pub fn hl_limits(eps: f64) -> Result<[Result<f64>; 4]> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(domain(format!("eps must be finite and nonnegative, got {eps}")));
    }
    const ALL: [Quantity; 4] = [Quantity::C, Quantity::D, Quantity::Are, Quantity::AreSerial];
    if eps > 0.0 {
        let rows = hl_rows(eps)?;
        return Ok(ALL.map(|q| extrapolate_rows(&rows, q)));
    }
    let r1 = hl_component_limit(HL_EPS_ZERO[0]);
    let r2 = hl_component_limit(HL_EPS_ZERO[1]);
    let ratio = HL_EPS_ZERO[0] / HL_EPS_ZERO[1];
    Ok(ALL.map(|q| {
        let l1 = r1.clone()?.get(q)?;
        let l2 = r2.clone()?.get(q)?;
        let limit = (ratio * l2 - l1) / (ratio - 1.0);
        if (limit - l2).abs() > EXTRAPOLATION_THRESHOLD {
            return Err(Error::ExtrapolationUnstable {
                first: l2,
                second: limit,
                threshold: EXTRAPOLATION_THRESHOLD,
            });
        }
        Ok(limit)
    }))
}

/// The three universal nonserial bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniversalBound {
    /// Wilcoxon relative to van der Waerden: `6 / pi`.
    WilcoxonVsVdw,
    /// Cauchy scores relative to Wilcoxon: `2 pi^2 / 3`.
    CauchyVsWilcoxon,
    /// Cauchy scores relative to van der Waerden: `4 pi`.
    CauchyVsVdw,
}

/// Upper bound on the nonserial efficiency, valid for every symmetric density.
pub fn universal_bound(which: UniversalBound) -> f64 {
    match which {
        UniversalBound::WilcoxonVsVdw => 6.0 / PI,
        UniversalBound::CauchyVsWilcoxon => 2.0 * PI * PI / 3.0,
        UniversalBound::CauchyVsVdw => 4.0 * PI,
    }
}

/// Bounds on the efficiency of Student scores with `nu <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentScoreBounds {
    pub vs_wilcoxon: f64,
    pub vs_vdw: f64,
}

/// Upper bounds on the efficiency of Student-`nu` scores relative to
/// Wilcoxon and to van der Waerden scores, for `0 < nu <= 1`.
pub fn student_score_bounds(nu: f64) -> Result<StudentScoreBounds> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(domain(format!("Student score bounds need 0 < nu <= 1, got {nu}")));
    }
    // Gamma(nu/2)^2 / Gamma((nu+1)/2)^2
    let g2 = (2.0 * (ln_gamma(0.5 * nu) - ln_gamma(0.5 * (nu + 1.0)))).exp();
    let common = g2 * (nu + 3.0) * (nu + 1.0) / nu;
    Ok(StudentScoreBounds {
        vs_wilcoxon: PI * common / 12.0,
        vs_vdw: common / 2.0,
    })
}

/// Bounds on `12 ARE(J / Wilcoxon)` from the slope of `J` on `[1/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeBound {
    /// Present when `J` is nondecreasing.
    pub lower: Option<f64>,
    /// Possibly infinite.
    pub upper: f64,
}

impl SlopeBound {
    /// The same bounds expressed on `ARE(J / Wilcoxon)` itself.
    pub fn on_are(&self) -> (Option<f64>, f64) {
        (self.lower.map(|l| l / 12.0), self.upper / 12.0)
    }
}

/// Bounds on `12 ARE_f(J / Wilcoxon)` valid for every admissible `f`.
///
/// Always `upper = sup|J'|^2 / K(J)`. A nondecreasing `J` also gets
/// `lower = inf|J'|^2 / K(J)`. When `J` is convex on `[1/2, 1)` the infimum
/// is `J'(1/2)`; when it is concave the supremum is `J'(1/2)`. Student scores
/// with `nu > 1` have `J'` unbounded, hence an infinite upper bound.
pub fn slope_bound(j: &Score) -> Result<SlopeBound> {
    let k = j.k_of_j()?;
    let at_half = j.deriv_at_half();
    let shape = j.shape();
    let kappa = match j.kappa_bounds() {
        Ok(b) => Some(b),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let mut upper = kappa.map_or(f64::INFINITY, |b| b.upper);
    let mut lower = kappa.map(|b| b.lower);
    if shape.is_convex() {
        lower = Some(at_half.abs());
    }
    if shape.is_concave() {
        upper = at_half.abs();
    }
    if !j.monotone() {
        lower = None;
    }
    Ok(SlopeBound {
        lower: lower.map(|l| l * l / k),
        upper: upper * upper / k,
    })
}

/// Bound on a serial efficiency relative to Spearman–Wald–Wolfowitz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SerialBound {
    /// Both scores convex: upper bound on `ARE*(SWW / (J1, J2))`.
    SwwOverPair(f64),
    /// Both scores concave: upper bound on `ARE*((J1, J2) / SWW)`.
    PairOverSww(f64),
}

impl SerialBound {
    pub fn value(&self) -> f64 {
        match *self {
            SerialBound::SwwOverPair(v) | SerialBound::PairOverSww(v) => v,
        }
    }
}

/// Serial bound for monotone skew-symmetric scores `j1`, `j2` with positive
/// slope at `1/2`.
///
/// Convex scores bound the efficiency of Spearman–Wald–Wolfowitz (and of
/// Kendall) relative to `(j1, j2)` by `144 K(J1) K(J2) / (J1'(1/2) J2'(1/2))^2`;
/// concave scores bound the reverse efficiency by the reciprocal.
pub fn serial_bound(j1: &Score, j2: &Score) -> Result<SerialBound> {
    for j in [j1, j2] {
        if !j.monotone() {
            return Err(Error::Shape(format!("{j} is not monotone")));
        }
        if !(j.deriv_at_half() > 0.0) {
            return Err(Error::Shape(format!("{j} has no positive slope at 1/2")));
        }
    }
    let k = j1.k_of_j()? * j2.k_of_j()?;
    let slope2 = (j1.deriv_at_half() * j2.deriv_at_half()).powi(2);
    let (s1, s2) = (j1.shape(), j2.shape());
    if s1.is_convex() && s2.is_convex() {
        Ok(SerialBound::SwwOverPair(144.0 * k / slope2))
    } else if s1.is_concave() && s2.is_concave() {
        Ok(SerialBound::PairOverSww(slope2 / (144.0 * k)))
    } else {
        Err(Error::Shape(format!(
            "{j1} and {j2} are neither both convex nor both concave on [1/2, 1)"
        )))
    }
}

/// What a parameter scan looks for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanTarget {
    /// The parameter at which the quantity equals this level.
    Level(f64),
    /// The interior maximiser of the quantity.
    Maximum,
}

/// Result of [`crossing_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub param: f64,
    pub value: f64,
}

/// Tolerance on the located parameter.
pub const SCAN_TOL: f64 = 1e-6;

/// Locates where a Wilcoxon / van der Waerden quantity crosses a level, or
/// peaks, as the family parameter runs over `bracket`.
pub fn crossing_scan(
    family: impl Fn(f64) -> Result<Density>,
    quantity: Quantity,
    target: ScanTarget,
    bracket: (f64, f64),
) -> Result<ScanResult> {
    let eval = |p: f64| -> Result<f64> { wilcoxon_vs_vdw(&family(p)?, 1e-11)?.get(quantity) };
    scan(eval, target, bracket)
}

/// Bisection for a level crossing or golden-section search for a maximum of
/// `eval` over `bracket`.
pub fn scan(
    eval: impl Fn(f64) -> Result<f64>,
    target: ScanTarget,
    bracket: (f64, f64),
) -> Result<ScanResult> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::NoBracket(format!("empty bracket [{lo}, {hi}]")));
    }
    match target {
        ScanTarget::Level(level) => {
            let mut f_lo = eval(lo)? - level;
            let f_hi = eval(hi)? - level;
            if f_lo * f_hi > 0.0 {
                return Err(Error::NoBracket(format!(
                    "quantity does not cross {level} on [{lo}, {hi}]"
                )));
            }
            while hi - lo > SCAN_TOL * (1.0 + lo.abs()) {
                let mid = 0.5 * (lo + hi);
                let f_mid = eval(mid)? - level;
                if f_mid == 0.0 {
                    return Ok(ScanResult { param: mid, value: level });
                }
                if (f_mid < 0.0) == (f_lo < 0.0) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            // Linear interpolation inside the final bracket.
            let f_hi = eval(hi)? - level;
            let param = if f_hi != f_lo {
                lo - f_lo * (hi - lo) / (f_hi - f_lo)
            } else {
                0.5 * (lo + hi)
            };
            Ok(ScanResult {
                param,
                value: eval(param)?,
            })
        }
        ScanTarget::Maximum => {
            let f = |p: f64| eval(p).unwrap_or(f64::NEG_INFINITY);
            let (arg, _) = golden_max(f, lo, hi, SCAN_TOL);
            let edge = 10.0 * SCAN_TOL * (1.0 + arg.abs());
            if arg - lo < edge || hi - arg < edge {
                return Err(Error::NoBracket(format!(
                    "maximum on [{lo}, {hi}] sits at the boundary {arg}"
                )));
            }
            Ok(ScanResult {
                param: arg,
                value: eval(arg)?,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gaussian_closed_forms() {
        let g = Density::gaussian();
        let w = Score::wilcoxon();
        let v = Score::van_der_waerden();
        let r = are_nonserial(&w, &v, &g).unwrap();
        assert_abs_diff_eq!(r.are, 3.0 / PI, epsilon = 1e-9);
        let s = are_serial(&w, &w, &v, &v, &g).unwrap();
        assert_abs_diff_eq!(s.are, 9.0 / (PI * PI), epsilon = 1e-9);
        assert!(!s.outside_f2);
    }

    #[test]
    fn identity_and_student_examples() {
        let f = Density::student(4.0).unwrap();
        let c = Score::cauchy();
        assert_abs_diff_eq!(are_nonserial(&c, &c, &f).unwrap().are, 1.0, epsilon = 1e-14);
        let r = are_nonserial(&Score::wilcoxon(), &Score::van_der_waerden(), &f).unwrap();
        assert_abs_diff_eq!(r.are, 1.11407, epsilon = 1e-5);
    }

    #[test]
    fn serial_flags_infinite_variance() {
        let w = Score::wilcoxon();
        let v = Score::van_der_waerden();
        let f = Density::student(2.0).unwrap();
        let r = are_serial(&w, &w, &v, &v, &f).unwrap();
        assert!(r.outside_f2);
        assert_abs_diff_eq!(r.are, 0.878736, epsilon = 1e-5);
        assert!(matches!(r.require_f2(), Err(Error::OutsideF2(_))));
        let cauchy = Density::student(1.0).unwrap();
        assert!(matches!(
            are_serial(&w, &w, &v, &v, &cauchy),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn universal_bounds() {
        assert_relative_eq!(universal_bound(UniversalBound::WilcoxonVsVdw), 1.909_859_317_102_744);
        assert_relative_eq!(universal_bound(UniversalBound::CauchyVsWilcoxon), 6.579_736_267_392_906);
        assert_relative_eq!(universal_bound(UniversalBound::CauchyVsVdw), 12.566_370_614_359_172);
    }

    #[test]
    fn student_bounds_reduce_to_cauchy_at_one() {
        let b = student_score_bounds(1.0).unwrap();
        assert_abs_diff_eq!(b.vs_wilcoxon, 2.0 * PI * PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.vs_vdw, 4.0 * PI, epsilon = 1e-12);
        let half = student_score_bounds(0.5).unwrap();
        assert!(half.vs_wilcoxon > b.vs_wilcoxon && half.vs_vdw > b.vs_vdw);
        assert!(student_score_bounds(1.5).is_err());
        assert!(student_score_bounds(0.0).is_err());
    }

    #[test]
    fn slope_bounds() {
        let v = slope_bound(&Score::van_der_waerden()).unwrap();
        assert_relative_eq!(v.lower.unwrap(), 2.0 * PI, max_relative = 1e-14);
        assert!(v.upper.is_infinite());
        let c = slope_bound(&Score::cauchy()).unwrap();
        assert_relative_eq!(c.upper / 12.0, 2.0 * PI * PI / 3.0, max_relative = 1e-14);
        assert!(c.lower.is_none());
        let w = slope_bound(&Score::wilcoxon()).unwrap();
        assert_eq!(w.lower, Some(12.0));
        assert_eq!(w.upper, 12.0);
        assert!(slope_bound(&Score::student(3.0).unwrap()).unwrap().upper.is_infinite());
    }

    #[test]
    fn serial_bounds() {
        let v = Score::van_der_waerden();
        let w = Score::wilcoxon();
        assert_relative_eq!(serial_bound(&v, &v).unwrap().value(), (6.0 / PI).powi(2), max_relative = 1e-14);
        assert_relative_eq!(serial_bound(&w, &w).unwrap().value(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(serial_bound(&v, &w).unwrap().value(), 6.0 / PI, max_relative = 1e-14);
        assert!(matches!(serial_bound(&Score::cauchy(), &v), Err(Error::Shape(_))));
    }

    #[test]
    fn scan_finds_level_and_maximum() {
        let r = scan(|x| Ok(x * x), ScanTarget::Level(2.0), (0.0, 3.0)).unwrap();
        assert_abs_diff_eq!(r.param, 2f64.sqrt(), epsilon = 1e-6);
        let m = scan(|x| Ok(-(x - 0.3).powi(2)), ScanTarget::Maximum, (0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(m.param, 0.3, epsilon = 1e-5);
        assert!(matches!(
            scan(|x| Ok(x), ScanTarget::Maximum, (0.0, 1.0)),
            Err(Error::NoBracket(_))
        ));
        assert!(matches!(
            scan(|x| Ok(x), ScanTarget::Level(5.0), (0.0, 1.0)),
            Err(Error::NoBracket(_))
        ));
    }
}
