//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! The integrator keeps a list of subintervals, always bisecting the one with
//! the largest error estimate, until the summed estimate meets
//! `max(abs_tol, rel_tol * |I|)`. Error estimates follow the QUADPACK
//! heuristics. The same machinery integrates complex-valued contour
//! integrands, which is what the Mellin-Barnes evaluators in
//! [`crate::specfun`] rely on.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_INTERVALS: usize = 4000;

const GK15_XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes, center last.
const GK15_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const GK21_XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const GK21_WGK: [f64; 11] = [
    0.011_694_638_867_371_87,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_61,
    0.109_387_158_802_297_6,
    0.123_491_976_262_065_9,
    0.134_709_217_311_473_3,
    0.142_775_938_577_060_1,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const GK21_WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982,
    0.269_266_719_309_996_4,
    0.295_524_224_714_752_9,
];

/// Controls for adaptive quadrature and for the truncated Mellin-Barnes contours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Imaginary half-length at which contour integrals are truncated.
    pub half_length: f64,
    /// Kronrod rule size: 15 or 21.
    pub nodes: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any one subinterval.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            half_length: 40.0,
            nodes: 21,
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_depth: 100,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_length.is_finite() && self.half_length > 0.0) {
            return Err(Error::Usage(format!(
                "contour half-length must be > 0, got {}",
                self.half_length
            )));
        }
        if self.nodes != 15 && self.nodes != 21 {
            return Err(Error::Usage(format!(
                "node count must be 15 or 21, got {}",
                self.nodes
            )));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Usage("tolerances must be > 0".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Usage("max refinement depth must be > 0".into()));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// A numerical result together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub abs_error: f64,
}

impl Evaluation {
    pub fn new(value: f64, abs_error: f64) -> Self {
        Self { value, abs_error }
    }

    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error: 0.0,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_error: self.abs_error * factor.abs(),
        }
    }
}

impl Add for Evaluation {
    type Output = Evaluation;
    fn add(self, rhs: Self) -> Self {
        Evaluation {
            value: self.value + rhs.value,
            abs_error: self.abs_error + rhs.abs_error,
        }
    }
}

/// Values the integrator can accumulate: reals and complex numbers.
pub(crate) trait Quadrable:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Quadrable for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Quadrable for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    depth: u32,
}

fn kronrod<T: Quadrable, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64, nodes: usize) -> (T, f64) {
    let (xgk, wgk, wg): (&[f64], &[f64], &[f64]) = match nodes {
        15 => (&GK15_XGK, &GK15_WGK, &GK15_WG),
        _ => (&GK21_XGK, &GK21_WGK, &GK21_WG),
    };
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let n = xgk.len();
    let gauss_has_center = nodes == 15;

    let fc = f(center);
    let mut res_k = fc * wgk[n - 1];
    let mut res_g = if gauss_has_center {
        fc * wg[wg.len() - 1]
    } else {
        T::zero()
    };
    let mut res_abs = fc.magnitude() * wgk[n - 1];
    let mut samples = Vec::with_capacity(2 * n);
    for j in 0..n - 1 {
        let dx = half * xgk[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        res_k = res_k + pair * wgk[j];
        res_abs += wgk[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            res_g = res_g + pair * wg[j / 2];
        }
        samples.push((j, f1, f2));
    }
    let mean = res_k * 0.5;
    let mut res_asc = wgk[n - 1] * (fc - mean).magnitude();
    for (j, f1, f2) in samples {
        res_asc += wgk[j] * ((f1 - mean).magnitude() + (f2 - mean).magnitude());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

pub(crate) fn integrate_generic<T, F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(T, f64)>
where
    T: Quadrable,
    F: FnMut(f64) -> T,
{
    cfg.validate()?;
    if a == b {
        return Ok((T::zero(), 0.0));
    }
    let (value, error) = kronrod(&mut f, a, b, cfg.nodes);
    let mut segments = vec![Segment {
        a,
        b,
        value,
        error,
        depth: 0,
    }];
    loop {
        let total = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if !total.magnitude().is_finite() || !total_err.is_finite() {
            return Err(Error::Accuracy {
                estimate: total.magnitude(),
                error: f64::INFINITY,
            });
        }
        if total_err <= target {
            return Ok((total, total_err));
        }
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.depth < cfg.max_depth)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::Accuracy {
                estimate: total.magnitude(),
                error: total_err,
            });
        };
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::Accuracy {
                estimate: total.magnitude(),
                error: total_err,
            });
        }
        let seg = segments.swap_remove(i);
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = kronrod(&mut f, seg.a, mid, cfg.nodes);
        let (v2, e2) = kronrod(&mut f, mid, seg.b, cfg.nodes);
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
            depth: seg.depth + 1,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
            depth: seg.depth + 1,
        });
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    let (value, err) = integrate_generic(f, a, b, cfg)?;
    Ok(Evaluation::new(value, err))
}

/// Integrates `f` over `[0, inf)` after mapping `x = scale * t / (1 - t)`.
///
/// `scale` should sit near where the integrand carries its mass; it only
/// affects efficiency, not the value.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Evaluation> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Usage(format!("mapping scale must be > 0, got {scale}")));
    }
    integrate(
        |t| {
            let one_minus = 1.0 - t;
            let x = scale * t / one_minus;
            let fx = f(x);
            if fx == 0.0 {
                0.0
            } else {
                fx * scale / (one_minus * one_minus)
            }
        },
        0.0,
        1.0,
        cfg,
    )
}
