//! Adaptive Gauss–Kronrod quadrature.
//!
//! A global adaptive scheme: the panel with the largest error estimate is
//! bisected until the summed error estimate meets the tolerance or the panel
//! budget runs out. Panels are summed in left-to-right order with Neumaier
//! compensation so results do not depend on the order of refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Default cap on the number of panels.
pub const DEFAULT_MAX_PANELS: usize = 2000;

/// Outcome of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
    pub subdivisions: usize,
}

impl QuadResult {
    /// Sum of two independent results.
    pub(crate) fn plus(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            abs_err: self.abs_err + other.abs_err,
            converged: self.converged && other.converged,
            subdivisions: self.subdivisions + other.subdivisions,
        }
    }

    pub(crate) fn scaled(self, c: f64) -> QuadResult {
        QuadResult {
            value: self.value * c,
            abs_err: self.abs_err * c.abs(),
            ..self
        }
    }
}

/// Stopping rule: the error estimate must fall below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    /// `tol * max(1, |value|)`: absolute for values of order one or less,
    /// relative for larger ones.
    pub fn mixed(tol: f64) -> Self {
        Tolerance { abs: tol, rel: tol }
    }

    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// 21-point Kronrod rule with the QUADPACK error heuristic.
fn gk21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || !err.is_finite() {
        return (value, f64::INFINITY);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Integrates `f` over the union of consecutive intervals given by `cuts`
/// (a sorted list of at least two points).
pub fn adaptive(
    f: impl Fn(f64) -> f64,
    cuts: &[f64],
    tol: Tolerance,
    max_panels: usize,
) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a {
            let (value, err) = gk21(&f, a, b);
            heap.push(Panel { a, b, value, err });
        }
    }
    let mut count = heap.len();
    let totals = |heap: &BinaryHeap<Panel>, done: &[Panel]| {
        let value = compensated_sum(heap.iter().chain(done).map(|p| p.value));
        let err = compensated_sum(heap.iter().chain(done).map(|p| p.err));
        (value, err)
    };
    let (mut value, mut err) = totals(&heap, &done);
    while err > tol.target(value) && count < max_panels {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || worst.b - worst.a <= 1e-14 * mid.abs() {
            // Too narrow to split any further.
            done.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        count += 1;
        // Incremental update, with a periodic exact recompute to stop drift.
        value += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        if count % 64 == 0 || err <= tol.target(value) {
            (value, err) = totals(&heap, &done);
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(done);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = compensated_sum(panels.iter().map(|p| p.value));
    let abs_err = compensated_sum(panels.iter().map(|p| p.err));
    QuadResult {
        value,
        abs_err,
        converged: abs_err <= tol.target(value) && value.is_finite(),
        subdivisions: panels.len(),
    }
}

/// `int_a^inf f(t) dt` through `t = a + s / (1 - s)`.
pub fn half_line(f: impl Fn(f64) -> f64, a: f64, tol: Tolerance) -> QuadResult {
    let g = |s: f64| {
        let r = 1.0 - s;
        let t = a + s / r;
        let v = f(t);
        if v == 0.0 {
            0.0
        } else {
            v / (r * r)
        }
    };
    adaptive(g, &[0.0, 0.5, 1.0], tol, DEFAULT_MAX_PANELS)
}
