//! Symmetric univariate densities: Gaussian, Student t, Cauchy,
//! power-exponential, Hodges–Lehmann and user-supplied log-concave densities.
//!
//! Every family can report its quantities at an upper-tail probability
//! `q = 1 - u` in `(0, 1/2]` through [`Density::tail_point`]. That is the
//! entry point used by the efficiency integrals: it never forms `1 - q` and
//! keeps logarithms where values would underflow, so the integrands stay
//! accurate out to `q` of order `1e-300`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_unit, domain, Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::scores::Shape;
use crate::special::{
    beta_reg_inv, gamma, ln_beta, ln_gamma, ln_gamma_inv, ln_gamma_q, norm_cdf, norm_pdf,
    norm_quantile, norm_sf, BetaRoot,
};

/// Even convex potential `mu` of a log-concave density `g = exp(-mu) / K`.
///
/// Only `x >= 0` is ever passed in.
pub trait Potential: Send + Sync + fmt::Debug {
    fn value(&self, x: f64) -> f64;
    /// First derivative, which is the location score of the density.
    fn d1(&self, x: f64) -> f64;
    fn d2(&self, x: f64) -> f64;
    /// Shape of the induced optimal score on `[1/2, 1)`, when known.
    fn score_shape(&self) -> Shape {
        Shape::Neither
    }
    fn name(&self) -> String {
        "logconcave".into()
    }
}

/// Log-concave density `exp(-mu(x)) / K` with `K` found by quadrature.
#[derive(Clone)]
pub struct LogConcave {
    potential: Arc<dyn Potential>,
    ln_k: f64,
}

impl fmt::Debug for LogConcave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogConcave")
            .field("potential", &self.potential)
            .field("ln_k", &self.ln_k)
            .finish()
    }
}

const INNER_TOL: f64 = 1e-13;

impl LogConcave {
    pub fn new(potential: Arc<dyn Potential>) -> Result<Self> {
        let mu0 = potential.value(0.0);
        let half = quadrature::half_line(
            |t| (mu0 - potential.value(t)).exp(),
            0.0,
            Tolerance::relative(INNER_TOL),
        );
        if !half.converged || !(half.value > 0.0) {
            return Err(Error::Divergence(format!(
                "normalizing constant of {} did not converge",
                potential.name()
            )));
        }
        let ln_k = std::f64::consts::LN_2 + half.value.ln() - mu0;
        Ok(LogConcave { potential, ln_k })
    }

    pub fn potential(&self) -> &dyn Potential {
        self.potential.as_ref()
    }

    /// Normalizing constant `K`.
    pub fn normalizer(&self) -> f64 {
        self.ln_k.exp()
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        -self.potential.value(x.abs()) - self.ln_k
    }

    /// `ln(1 - G(x))` for `x >= 0`.
    fn ln_sf(&self, x: f64) -> f64 {
        let mu_x = self.potential.value(x);
        let rest = quadrature::half_line(
            |t| (mu_x - self.potential.value(x + t)).exp(),
            0.0,
            Tolerance::relative(INNER_TOL),
        );
        rest.value.ln() - mu_x - self.ln_k
    }

    /// `x >= 0` with upper-tail probability `q`.
    fn upper_quantile(&self, q: f64) -> f64 {
        if q >= 0.5 {
            return 0.0;
        }
        let ln_q = q.ln();
        let eval = |x: f64| {
            let ln_s = self.ln_sf(x);
            (ln_q - ln_s, (self.ln_pdf(x) - ln_s).exp())
        };
        let mut hi = 1.0;
        while eval(hi).0 <= 0.0 {
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        crate::special::solve_increasing(eval, 0.0, hi, 0.5 * hi)
    }
}

/// The density families.
#[derive(Debug, Clone)]
pub enum Family {
    Gaussian,
    StudentT { nu: f64 },
    Cauchy,
    PowerExp { alpha: f64 },
    /// Standard normal on `[-eps, eps]` with tails compressed by a factor `a`.
    HodgesLehmann { a: f64, eps: f64 },
    LogConcave(LogConcave),
}

/// Regularity-class membership of a density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    /// Finite Fisher information for location.
    pub in_f: bool,
    /// Density vanishes at plus and minus infinity.
    pub in_f0: bool,
    pub finite_variance: bool,
    pub has_density_jump: bool,
}

/// Quantities of a density at the point `x = F^{-1}(1 - q) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPoint {
    pub x: f64,
    pub pdf: f64,
    /// Location score `-f'(x) / f(x)`.
    pub score: f64,
    /// Derivative of the location score.
    pub score_deriv: f64,
}

/// A symmetric density, optionally rescaled.
#[derive(Debug, Clone)]
pub struct Density {
    family: Family,
    scale: f64,
}

impl Density {
    pub fn new(family: Family) -> Result<Self> {
        let ok = match &family {
            Family::Gaussian | Family::Cauchy | Family::LogConcave(_) => true,
            Family::StudentT { nu } => nu.is_finite() && *nu > 0.0,
            Family::PowerExp { alpha } => alpha.is_finite() && *alpha > 0.0,
            Family::HodgesLehmann { a, eps } => {
                a.is_finite() && *a > 0.0 && eps.is_finite() && *eps >= 0.0
            }
        };
        if !ok {
            return Err(domain(format!("invalid family parameters: {family:?}")));
        }
        Ok(Density { family, scale: 1.0 })
    }

    pub fn gaussian() -> Self {
        Density {
            family: Family::Gaussian,
            scale: 1.0,
        }
    }

    pub fn cauchy() -> Self {
        Density {
            family: Family::Cauchy,
            scale: 1.0,
        }
    }

    pub fn student(nu: f64) -> Result<Self> {
        Self::new(Family::StudentT { nu })
    }

    pub fn power_exp(alpha: f64) -> Result<Self> {
        Self::new(Family::PowerExp { alpha })
    }

    pub fn hodges_lehmann(a: f64, eps: f64) -> Result<Self> {
        Self::new(Family::HodgesLehmann { a, eps })
    }

    pub fn log_concave(potential: Arc<dyn Potential>) -> Result<Self> {
        Self::new(Family::LogConcave(LogConcave::new(potential)?))
    }

    /// The same family with `x` replaced by `x / scale`.
    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(domain(format!("scale must be positive, got {scale}")));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn flags(&self) -> Flags {
        let mut flags = Flags {
            in_f: true,
            in_f0: true,
            finite_variance: true,
            has_density_jump: false,
        };
        match self.family {
            Family::StudentT { nu } => flags.finite_variance = nu > 2.0,
            Family::Cauchy => flags.finite_variance = false,
            Family::PowerExp { alpha } => flags.in_f = alpha > 0.5,
            Family::HodgesLehmann { .. } => {
                flags.in_f = false;
                flags.has_density_jump = true;
            }
            Family::Gaussian | Family::LogConcave(_) => {}
        }
        flags
    }

    /// Exponent `g` such that `F^{-1}(1 - q)` grows like `q^{-g}` as `q -> 0`
    /// (zero for families with all moments).
    pub fn quantile_tail_exponent(&self) -> f64 {
        match self.family {
            Family::StudentT { nu } => 1.0 / nu,
            Family::Cauchy => 1.0,
            _ => 0.0,
        }
    }

    /// Unit-scale density at `x >= 0`.
    fn pdf_std(&self, x: f64) -> f64 {
        match &self.family {
            Family::Gaussian => norm_pdf(x),
            Family::StudentT { nu } => {
                let (ln_w, _, _) = student_w(x, *nu);
                student_pdf_from_ln_w(ln_w, *nu)
            }
            Family::Cauchy => 1.0 / (std::f64::consts::PI * (1.0 + x * x)),
            Family::PowerExp { alpha } => {
                (-x.powf(*alpha)).exp() / (2.0 * gamma(1.0 + 1.0 / alpha))
            }
            Family::HodgesLehmann { a, eps } => {
                if x <= *eps {
                    norm_pdf(x)
                } else {
                    a * norm_pdf(eps + a * (x - eps))
                }
            }
            Family::LogConcave(lc) => lc.ln_pdf(x).exp(),
        }
    }

    /// Unit-scale upper-tail probability at `x >= 0`.
    fn sf_std(&self, x: f64) -> f64 {
        match &self.family {
            Family::Gaussian => norm_sf(x),
            Family::StudentT { nu } => {
                let (ln_w, w, y) = student_w(x, *nu);
                0.5 * crate::special::ln_beta_reg_parts(ln_w, w, y, 0.5 * nu, 0.5).exp()
            }
            Family::Cauchy => {
                if x > 1.0 {
                    (1.0 / x).atan() / std::f64::consts::PI
                } else {
                    0.5 - x.atan() / std::f64::consts::PI
                }
            }
            Family::PowerExp { alpha } => {
                if x == 0.0 {
                    0.5
                } else {
                    0.5 * ln_gamma_q(1.0 / alpha, x.powf(*alpha)).exp()
                }
            }
            Family::HodgesLehmann { a, eps } => {
                if x <= *eps {
                    norm_sf(x)
                } else {
                    norm_sf(eps + a * (x - eps))
                }
            }
            Family::LogConcave(lc) => {
                if x == 0.0 {
                    0.5
                } else {
                    lc.ln_sf(x).exp()
                }
            }
        }
    }

    /// Density value.
    pub fn pdf(&self, x: f64) -> f64 {
        self.pdf_std((x / self.scale).abs()) / self.scale
    }

    /// Distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        let z = x / self.scale;
        if z >= 0.0 {
            // Gaussian-type families are more accurate without the subtraction.
            if let Family::Gaussian = self.family {
                return norm_cdf(z);
            }
            1.0 - self.sf_std(z)
        } else {
            self.sf_std(-z)
        }
    }

    /// Survival function `1 - F(x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        let z = x / self.scale;
        if z >= 0.0 {
            self.sf_std(z)
        } else {
            1.0 - self.sf_std(-z)
        }
    }

    /// Quantile function.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        Ok(self.quantile_unchecked(u))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        if u == 0.5 {
            0.0
        } else if u < 0.5 {
            -self.tail_point(u).x
        } else {
            self.tail_point(1.0 - u).x
        }
    }

    /// `-f'(x) / f(x)`; undefined at the density jumps of a Hodges–Lehmann
    /// density.
    pub fn location_score(&self, x: f64) -> Result<f64> {
        let z = x / self.scale;
        let sign = if z < 0.0 { -1.0 } else { 1.0 };
        let t = z.abs();
        let s = match &self.family {
            Family::Gaussian => t,
            Family::StudentT { nu } => {
                let r = t / nu.sqrt();
                if r == 0.0 {
                    0.0
                } else {
                    (nu + 1.0) / nu.sqrt() / (r + 1.0 / r)
                }
            }
            Family::Cauchy => {
                if t == 0.0 {
                    0.0
                } else {
                    2.0 / (t + 1.0 / t)
                }
            }
            Family::PowerExp { alpha } => {
                if t == 0.0 {
                    if *alpha > 1.0 {
                        0.0
                    } else if *alpha == 1.0 {
                        return Err(domain("Laplace score is undefined at 0"));
                    } else {
                        f64::INFINITY
                    }
                } else {
                    alpha * t.powf(alpha - 1.0)
                }
            }
            Family::HodgesLehmann { a, eps } => {
                if t == *eps && *a != 1.0 {
                    return Err(domain(format!(
                        "Hodges-Lehmann density jumps at x = {}",
                        eps * self.scale
                    )));
                }
                if t <= *eps {
                    t
                } else {
                    a * (eps + a * (t - eps))
                }
            }
            Family::LogConcave(lc) => lc.potential.d1(t),
        };
        Ok(sign * s / self.scale)
    }

    /// Fisher information for location, possibly infinite.
    pub fn fisher_info(&self) -> Result<f64> {
        let info = match &self.family {
            Family::Gaussian => 1.0,
            Family::StudentT { nu } => (nu + 1.0) / (nu + 3.0),
            Family::Cauchy => 0.5,
            Family::PowerExp { alpha } => {
                if *alpha > 0.5 {
                    alpha * alpha * (ln_gamma(2.0 - 1.0 / alpha) - ln_gamma(1.0 / alpha)).exp()
                } else {
                    f64::INFINITY
                }
            }
            Family::HodgesLehmann { .. } => f64::INFINITY,
            Family::LogConcave(lc) => {
                let p = lc.potential.as_ref();
                let r = quadrature::half_line(
                    |t| {
                        let d = p.d1(t);
                        d * d * (-p.value(t) - lc.ln_k).exp()
                    },
                    0.0,
                    Tolerance::relative(1e-12),
                );
                if !r.converged {
                    return Err(Error::Divergence(format!(
                        "Fisher information of {}: {r:?}",
                        p.name()
                    )));
                }
                2.0 * r.value
            }
        };
        Ok(info / (self.scale * self.scale))
    }

    /// `f(F^{-1}(u))`, taken on the branch that contains `F^{-1}(u)`.
    pub fn pdf_at_quantile(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        let q = if u > 0.5 { 1.0 - u } else { u };
        Ok(self.tail_point(q).pdf)
    }

    /// `n` draws by inverse-cdf sampling from a generator seeded by `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, n)
    }

    /// `n` draws using the supplied generator.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u = loop {
                    let u: f64 = rng.gen();
                    if u > 0.0 {
                        break u;
                    }
                };
                self.quantile_unchecked(u)
            })
            .collect()
    }

    /// Quantities at `x = F^{-1}(1 - q)`, for `q` in `(0, 1/2]`.
    ///
    /// For the Hodges–Lehmann family the central branch is used up to and
    /// including `u = Phi(eps)`.
    pub fn tail_point(&self, q: f64) -> TailPoint {
        let p = self.tail_point_std(q);
        let s = self.scale;
        TailPoint {
            x: p.x * s,
            pdf: p.pdf / s,
            score: p.score / s,
            score_deriv: p.score_deriv / (s * s),
        }
    }

    fn tail_point_std(&self, q: f64) -> TailPoint {
        match &self.family {
            Family::Gaussian => {
                let z = -norm_quantile(q);
                TailPoint {
                    x: z,
                    pdf: norm_pdf(z),
                    score: z,
                    score_deriv: 1.0,
                }
            }
            Family::StudentT { nu } => student_tail_point(q, *nu),
            Family::Cauchy => {
                let pq = std::f64::consts::PI * q;
                let s2 = pq.sin().powi(2);
                let c2 = (2.0 * pq).cos();
                TailPoint {
                    x: 1.0 / pq.tan(),
                    pdf: s2 / std::f64::consts::PI,
                    score: (2.0 * pq).sin(),
                    score_deriv: -2.0 * c2 * s2,
                }
            }
            Family::PowerExp { alpha } => {
                let shape = 1.0 / alpha;
                let ln_t = if q >= 0.5 {
                    f64::NEG_INFINITY
                } else {
                    ln_gamma_inv(1.0 - 2.0 * q, 2.0 * q, shape)
                };
                let t = ln_t.exp();
                let ln_x = ln_t / alpha;
                TailPoint {
                    x: ln_x.exp(),
                    pdf: (-t).exp() / (2.0 * gamma(1.0 + shape)),
                    score: alpha * ((alpha - 1.0) * ln_x).exp(),
                    score_deriv: alpha * (alpha - 1.0) * ((alpha - 2.0) * ln_x).exp(),
                }
            }
            Family::HodgesLehmann { a, eps } => {
                let z = -norm_quantile(q);
                if q >= norm_sf(*eps) {
                    TailPoint {
                        x: z,
                        pdf: norm_pdf(z),
                        score: z,
                        score_deriv: 1.0,
                    }
                } else {
                    TailPoint {
                        x: eps + (z - eps) / a,
                        pdf: a * norm_pdf(z),
                        score: a * z,
                        score_deriv: a * a,
                    }
                }
            }
            Family::LogConcave(lc) => {
                let x = lc.upper_quantile(q);
                let p = lc.potential.as_ref();
                TailPoint {
                    x,
                    pdf: lc.ln_pdf(x).exp(),
                    score: p.d1(x),
                    score_deriv: p.d2(x),
                }
            }
        }
    }

    /// Short identifier, matching the command-line syntax.
    pub fn label(&self) -> String {
        let base = match &self.family {
            Family::Gaussian => "gaussian".to_string(),
            Family::StudentT { nu } => format!("student:{nu}"),
            Family::Cauchy => "cauchy".to_string(),
            Family::PowerExp { alpha } => format!("powerexp:{alpha}"),
            Family::HodgesLehmann { a, eps } => format!("hl:{a}:{eps}"),
            Family::LogConcave(lc) => lc.potential.name(),
        };
        if self.scale == 1.0 {
            base
        } else {
            format!("{base}*{}", self.scale)
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Density {
    type Err = Error;

    /// Parses `gaussian`, `cauchy`, `student:<nu>`, `powerexp:<alpha>` or
    /// `hl:<a>:<eps>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{t}' in family '{s}'")))
        };
        match parts.as_slice() {
            ["gaussian"] | ["normal"] => Ok(Density::gaussian()),
            ["cauchy"] => Ok(Density::cauchy()),
            ["student", nu] => Density::student(num(nu)?),
            ["powerexp", alpha] => Density::power_exp(num(alpha)?),
            ["hl", a, eps] => Density::hodges_lehmann(num(a)?, num(eps)?),
            _ => Err(Error::Parse(format!("unknown family '{s}'"))),
        }
    }
}

/// `(ln w, w, y)` with `w = nu / (nu + x^2)` and `y = 1 - w`.
fn student_w(x: f64, nu: f64) -> (f64, f64, f64) {
    let t = x / nu.sqrt();
    if t > 1.0 {
        let r = 1.0 / t;
        let r2 = r * r;
        let w = r2 / (1.0 + r2);
        (2.0 * r.ln() - r2.ln_1p(), w, 1.0 / (1.0 + r2))
    } else {
        let t2 = t * t;
        (-t2.ln_1p(), 1.0 / (1.0 + t2), t2 / (1.0 + t2))
    }
}

fn student_pdf_from_ln_w(ln_w: f64, nu: f64) -> f64 {
    (0.5 * (nu + 1.0) * ln_w - 0.5 * nu.ln() - ln_beta(0.5 * nu, 0.5)).exp()
}

/// Student point from the root of `I_w(nu/2, 1/2) = 2q`.
pub(crate) fn student_root(q: f64, nu: f64) -> BetaRoot {
    beta_reg_inv(2.0 * q, 1.0 - 2.0 * q, 0.5 * nu, 0.5)
}

fn student_tail_point(q: f64, nu: f64) -> TailPoint {
    let r = student_root(q, nu);
    let (w, y) = (r.x, r.y);
    let x = if r.ln_x == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        nu.sqrt() * (0.5 * (r.ln_y - r.ln_x)).exp()
    };
    let c = (nu + 1.0) / nu.sqrt();
    TailPoint {
        x,
        pdf: student_pdf_from_ln_w(r.ln_x, nu),
        score: c * (0.5 * (r.ln_x + r.ln_y)).exp(),
        score_deriv: (nu + 1.0) / nu * (w - y) * w,
    }
}
