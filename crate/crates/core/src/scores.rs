//! Score-generating functions `J` on `(0, 1)`.
//!
//! All shipped scores are skew-symmetric about `1/2`, so they are evaluated
//! from the upper half: [`Score::tail_eval`] takes `q = 1 - u` directly and is
//! what the efficiency integrals use.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::densities::{Density, Family};
use crate::error::{check_unit, domain, Error, Result};
use crate::special::{ln_beta, norm_pdf, norm_quantile, SQRT_2PI};

/// Shape of `J` on `[1/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Affine, hence both convex and concave.
    Linear,
    ConvexOnUpperHalf,
    ConcaveOnUpperHalf,
    Neither,
}

impl Shape {
    pub fn is_convex(self) -> bool {
        matches!(self, Shape::Linear | Shape::ConvexOnUpperHalf)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, Shape::Linear | Shape::ConcaveOnUpperHalf)
    }
}

/// The score families.
#[derive(Debug, Clone)]
pub enum ScoreKind {
    /// `u - 1/2`.
    Wilcoxon,
    /// Normal quantile `Phi^{-1}(u)`.
    VanDerWaerden,
    /// `sin(2 pi (u - 1/2))`.
    Cauchy,
    /// Location score of the Student `t_nu` density at its quantile.
    Student { nu: f64 },
    /// Optimal score `phi_g(G^{-1}(u))` of a density `g`.
    FromDensity(Density),
}

/// Bounds on `|J'(u)|` over `u >= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaBounds {
    /// Infimum of `|J'|`.
    pub lower: f64,
    /// Supremum of `|J'|`, possibly infinite.
    pub upper: f64,
    /// Found by a numerical scan rather than in closed form.
    pub numeric: bool,
    /// The scan was cut off at `u = 1 - 1e-9` and an extremum sat at the cut.
    pub truncated: bool,
}

/// A score-generating function.
#[derive(Debug, Clone)]
pub struct Score {
    kind: ScoreKind,
}

impl Score {
    pub fn new(kind: ScoreKind) -> Result<Self> {
        match &kind {
            ScoreKind::Student { nu } if !(nu.is_finite() && *nu > 0.0) => {
                return Err(domain(format!("Student score needs nu > 0, got {nu}")));
            }
            ScoreKind::FromDensity(g) => match g.family() {
                Family::HodgesLehmann { .. } => {
                    return Err(domain("Hodges-Lehmann densities have no continuous score"));
                }
                Family::PowerExp { alpha } if *alpha <= 1.0 => {
                    return Err(domain(format!(
                        "power-exponential score with alpha = {alpha} is not continuous at the median"
                    )));
                }
                _ => {}
            },
            _ => {}
        }
        Ok(Score { kind })
    }

    pub fn wilcoxon() -> Self {
        Score {
            kind: ScoreKind::Wilcoxon,
        }
    }

    pub fn van_der_waerden() -> Self {
        Score {
            kind: ScoreKind::VanDerWaerden,
        }
    }

    pub fn cauchy() -> Self {
        Score {
            kind: ScoreKind::Cauchy,
        }
    }

    pub fn student(nu: f64) -> Result<Self> {
        Self::new(ScoreKind::Student { nu })
    }

    pub fn from_density(g: Density) -> Result<Self> {
        Self::new(ScoreKind::FromDensity(g))
    }

    pub fn kind(&self) -> &ScoreKind {
        &self.kind
    }

    /// Whether `J` is nondecreasing on `(0, 1)`.
    pub fn monotone(&self) -> bool {
        match &self.kind {
            ScoreKind::Wilcoxon | ScoreKind::VanDerWaerden => true,
            ScoreKind::Cauchy | ScoreKind::Student { .. } => false,
            ScoreKind::FromDensity(g) => !matches!(
                g.family(),
                Family::StudentT { .. } | Family::Cauchy
            ),
        }
    }

    pub fn shape(&self) -> Shape {
        match &self.kind {
            ScoreKind::Wilcoxon => Shape::Linear,
            ScoreKind::VanDerWaerden => Shape::ConvexOnUpperHalf,
            ScoreKind::Cauchy => Shape::ConcaveOnUpperHalf,
            ScoreKind::Student { .. } => Shape::Neither,
            ScoreKind::FromDensity(g) => match g.family() {
                Family::Gaussian => Shape::ConvexOnUpperHalf,
                Family::PowerExp { alpha } if *alpha == 2.0 => Shape::ConvexOnUpperHalf,
                Family::Cauchy => Shape::ConcaveOnUpperHalf,
                Family::LogConcave(lc) => lc.potential().score_shape(),
                _ => Shape::Neither,
            },
        }
    }

    /// `(J(1 - q), J'(1 - q))` for `q` in `(0, 1/2]`.
    pub fn tail_eval(&self, q: f64) -> (f64, f64) {
        match &self.kind {
            ScoreKind::Wilcoxon => (0.5 - q, 1.0),
            ScoreKind::VanDerWaerden => {
                let z = -norm_quantile(q);
                (z, 1.0 / norm_pdf(z))
            }
            ScoreKind::Cauchy => {
                let a = 2.0 * PI * q;
                (a.sin(), -2.0 * PI * a.cos())
            }
            ScoreKind::Student { nu } => {
                let nu = *nu;
                let r = crate::densities::student_root(q, nu);
                let c = (nu + 1.0) / nu.sqrt();
                let j = c * (0.5 * (r.ln_x + r.ln_y)).exp();
                let scale = (ln_beta(0.5 * nu, 0.5) + 0.5 * (1.0 - nu) * r.ln_x).exp();
                (j, c * (r.x - r.y) * scale)
            }
            ScoreKind::FromDensity(g) => {
                let p = g.tail_point(q);
                (p.score, p.score_deriv / p.pdf)
            }
        }
    }

    /// `J(u)`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        if u == 0.5 {
            return Ok(0.0);
        }
        Ok(if u > 0.5 {
            self.tail_eval(1.0 - u).0
        } else {
            -self.tail_eval(u).0
        })
    }

    /// `J'(u)`.
    pub fn deriv(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        let q = if u > 0.5 { 1.0 - u } else { u };
        Ok(self.tail_eval(q).1)
    }

    /// `J'(1/2)`.
    pub fn deriv_at_half(&self) -> f64 {
        self.tail_eval(0.5).1
    }

    /// `K(J)`, the integral of `J^2` over `(0, 1)`.
    pub fn k_of_j(&self) -> Result<f64> {
        match &self.kind {
            ScoreKind::Wilcoxon => Ok(1.0 / 12.0),
            ScoreKind::VanDerWaerden => Ok(1.0),
            ScoreKind::Cauchy => Ok(0.5),
            ScoreKind::Student { nu } => Ok((nu + 1.0) / (nu + 3.0)),
            ScoreKind::FromDensity(g) => {
                let info = g.fisher_info()?;
                if info.is_finite() {
                    Ok(info)
                } else {
                    Err(Error::Divergence(format!("{g} has infinite Fisher information")))
                }
            }
        }
    }

    /// Closed-form bounds on `|J'|` over `[1/2, 1)`.
    ///
    /// Student scores with `nu > 1` have `J' -> -inf` and no usable upper
    /// bound; use [`Score::kappa_scan`] for a truncated numerical value.
    pub fn kappa_bounds(&self) -> Result<KappaBounds> {
        let closed = |lower, upper| KappaBounds {
            lower,
            upper,
            numeric: false,
            truncated: false,
        };
        match &self.kind {
            ScoreKind::Wilcoxon => Ok(closed(1.0, 1.0)),
            ScoreKind::VanDerWaerden => Ok(closed(SQRT_2PI, f64::INFINITY)),
            ScoreKind::Cauchy => Ok(closed(0.0, 2.0 * PI)),
            ScoreKind::Student { nu } if *nu <= 1.0 => {
                let upper = (nu + 1.0) * ln_beta(0.5 * nu, 0.5).exp() / nu.sqrt();
                Ok(closed(0.0, upper))
            }
            ScoreKind::Student { nu } => Err(Error::Unsupported(format!(
                "Student score with nu = {nu} > 1 has J' unbounded below near u = 1"
            ))),
            ScoreKind::FromDensity(g) => match g.family() {
                Family::Gaussian => Ok(closed(SQRT_2PI * g.scale(), f64::INFINITY)),
                _ => Ok(self.kappa_scan()),
            },
        }
    }

    /// Numerical infimum and supremum of `|J'|` over `[1/2, 1 - 1e-9]`.
    ///
    /// A coarse grid in `ln(1 - u)` locates the extremes, which golden-section
    /// search then refines.
    pub fn kappa_scan(&self) -> KappaBounds {
        const Q_MIN: f64 = 1e-9;
        let s_lo = std::f64::consts::LN_2;
        let s_hi = -Q_MIN.ln();
        let abs_d = |s: f64| self.tail_eval((-s).exp()).1.abs();
        let n = 400;
        let grid: Vec<f64> = (0..=n)
            .map(|i| s_lo + (s_hi - s_lo) * i as f64 / n as f64)
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&s| abs_d(s)).collect();
        let refine = |i: usize, sign: f64| {
            if i == 0 || i == n {
                return (sign * vals[i], i == n);
            }
            let (_, v) = golden_max(|s| sign * abs_d(s), grid[i - 1], grid[i + 1], 1e-9);
            (v.max(sign * vals[i]), false)
        };
        let i_max = (0..=n).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
        let i_min = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
        let (upper, t_up) = refine(i_max, 1.0);
        let (neg_lower, t_lo) = refine(i_min, -1.0);
        KappaBounds {
            lower: -neg_lower,
            upper,
            numeric: true,
            truncated: t_up || t_lo,
        }
    }

    /// Short identifier, matching the command-line syntax.
    pub fn label(&self) -> String {
        match &self.kind {
            ScoreKind::Wilcoxon => "wilcoxon".into(),
            ScoreKind::VanDerWaerden => "vdw".into(),
            ScoreKind::Cauchy => "cauchy".into(),
            ScoreKind::Student { nu } => format!("student:{nu}"),
            ScoreKind::FromDensity(g) => format!("optimal[{g}]"),
        }
    }
}

/// Maximum of a unimodal function on `[a, b]` by golden-section search.
/// Golden-section search; returns the maximiser and the maximum.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + c.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Score {
    type Err = Error;

    /// Parses `wilcoxon`, `vdw`, `cauchy`, `student:<nu>` or
    /// `optimal:<density>` (the optimal scores of a density, e.g. `optimal:powerexp:3`).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["wilcoxon"] | ["w"] => Ok(Score::wilcoxon()),
            ["vdw"] | ["normal"] => Ok(Score::van_der_waerden()),
            ["cauchy"] => Ok(Score::cauchy()),
            ["student", nu] => {
                let nu = nu
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad degrees of freedom in '{s}'")))?;
                Score::student(nu)
            }
            ["optimal", rest @ ..] if !rest.is_empty() => Score::from_density(rest.join(":").parse()?),
            _ => Err(Error::Parse(format!("unknown score '{s}'"))),
        }
    }
}
