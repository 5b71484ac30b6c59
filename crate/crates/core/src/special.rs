//! Scalar special functions: log-gamma, factorials, binomials and Jacobi
//! polynomials with derivatives.

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// zeta(j) - 1 for j = 2, 3, ...
const ZETA_MINUS_ONE: [f64; 30] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214_3e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891_5e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_110_6e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504_3e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
];

/// B_{2j} / (2j (2j - 1)) for the Stirling tail.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(2 + z) for |z| <= 1/2, from the Taylor series about 2.
fn ln_gamma_near_two(z: f64) -> f64 {
    let mut sum = (1.0 - EULER_GAMMA) * z;
    // (-z)^j, starting from j = 1
    let mut zpow = -z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let j = (i + 2) as f64;
        zpow *= -z;
        sum += c * zpow / j;
    }
    sum
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut tail = 0.0;
    let mut p = inv;
    for c in STIRLING {
        tail += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + tail
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Arguments below 1.5 are moved up by one step, arguments in (2.5, 12)
/// are reduced down into [1.5, 2.5] so the product correction only ever
/// adds positive logarithms, and large arguments use the Stirling series.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma needs x > 0, got {x}"));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // ln Γ(x) = ln Γ(x + 1) - ln x
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        let z = x - 1.0;
        return ln_gamma_near_two(z) - z.ln_1p();
    }
    if x <= 2.5 {
        return ln_gamma_near_two(x - 2.0);
    }
    if x < 12.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return ln_gamma_near_two(y - 2.0) + prod.ln();
    }
    ln_gamma_stirling(x)
}

/// ln Γ for arguments the caller guarantees positive.
pub(crate) fn lgam(x: f64) -> f64 {
    debug_assert!(x > 0.0, "lgam({x})");
    ln_gamma_pos(x)
}

/// ln(n!)
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma_pos(n as f64 + 1.0)
    }
}

pub fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Degree and parameters of a Jacobi polynomial P_n^{(a,b)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex {
    pub n: u32,
    pub a: f64,
    pub b: f64,
}

impl JacobiIndex {
    pub fn new(n: u32, a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0) || !(b > -1.0) {
            return domain(format!(
                "Jacobi parameters need a, b > -1, got a = {a}, b = {b}"
            ));
        }
        Ok(Self { n, a, b })
    }
}

/// P_n^{(a,b)}(z) by the ascending three-term recurrence.
fn jacobi_value(n: u32, a: f64, b: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = a + b;
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (ab + 2.0) * z;
    for m in 2..=n {
        let m = m as f64;
        let c = 2.0 * m + ab;
        let a1 = 2.0 * m * (m + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * z + a * a - b * b);
        let a3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * c;
        let next = (a2 * cur - a3 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `order`-th derivative in z of P_n^{(a,b)}(z).
///
/// Uses d/dz P_n^{(a,b)} = (n + a + b + 1)/2 · P_{n-1}^{(a+1,b+1)} repeatedly.
pub fn jacobi(idx: JacobiIndex, z: f64, order: u32) -> f64 {
    let JacobiIndex { n, a, b } = idx;
    if order > n {
        return 0.0;
    }
    let mut scale = 1.0;
    for j in 0..order {
        scale *= 0.5 * (n as f64 + a + b + 1.0 + j as f64);
    }
    scale * jacobi_value(n - order, a + order as f64, b + order as f64, z)
}

/// Value and all derivatives up to `max_order` of P_n^{(a,b)} at z.
pub fn jacobi_derivatives(idx: JacobiIndex, z: f64, max_order: usize) -> Vec<f64> {
    (0..=max_order).map(|m| jacobi(idx, z, m as u32)).collect()
}
