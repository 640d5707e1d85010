//! Classical gamma-family primitives shared by the rest of the crate.
//!
//! Real log-gamma uses a 14-term Lanczos-type rational approximation
//! (shift 671/128) which is accurate to a few ulps on the positive axis.
//! The same approximation, evaluated in complex arithmetic, backs the
//! Mellin–Barnes integrand in [`crate::kcore`].

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_88e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Largest argument for which `gamma` is finite.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn lanczos_series(x: f64) -> f64 {
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    ser
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // keeps the relative error small near the pole at 0
        return ln_gamma(x + 1.0) - x.ln();
    }
    let tmp = x + LANCZOS_SHIFT;
    (x + 0.5) * tmp.ln() - tmp + (SQRT_2PI * lanczos_series(x) / x).ln()
}

/// `Γ(x)` for real `x`; poles return `NaN`.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        // Γ(x) = π / (sin(πx) Γ(1−x))
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x >= GAMMA_MAX_ARG {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return gamma(x + 1.0) / x;
    }
    if x == x.floor() && x <= 23.0 {
        let mut f = 1.0;
        let mut i = 2.0;
        while i < x {
            f *= i;
            i += 1.0;
        }
        return f;
    }
    let tmp = x + LANCZOS_SHIFT;
    // split the power so tmp^(x+1/2) cannot overflow before e^{-tmp} is applied
    let half = tmp.powf(0.5 * (x + 0.5));
    SQRT_2PI * lanczos_series(x) / x * half * (half * (-tmp).exp())
}

/// `1/Γ(x)`, entire: exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return 0.0;
        }
        let reflected = 1.0 - x;
        if reflected < GAMMA_MAX_ARG {
            return sin_pi(x) * gamma(reflected) / PI;
        }
        let s = sin_pi(x);
        return s.signum() * (ln_gamma(reflected) + s.abs().ln() - LN_PI).exp();
    }
    if x < GAMMA_MAX_ARG {
        1.0 / gamma(x)
    } else {
        (-ln_gamma(x)).exp()
    }
}

/// `ln Γ(a + n) − ln Γ(a)`, i.e. the log of the rising factorial `(a)_n`, for `a > 0`.
pub fn ln_rising(a: f64, n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    ln_gamma(a + n) - ln_gamma(a)
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Classical beta function `B(a, b)` for `a, b > 0`.
pub fn beta(a: f64, b: f64) -> f64 {
    if a + b < GAMMA_MAX_ARG {
        gamma(a) * gamma(b) / gamma(a + b)
    } else {
        ln_beta(a, b).exp()
    }
}

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    let r = x - 2.0 * (0.5 * x).floor(); // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 35.0 {
        z + (-z).exp()
    } else if z < -35.0 {
        z.exp()
    } else {
        z.exp().ln_1p()
    }
}

/// Principal-branch `ln Γ(z)` for complex `z` away from the poles.
///
/// Only `exp` of the result is meaningful to callers; the imaginary part is
/// correct modulo `2π`.
pub fn ln_gamma_c(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        return Complex64::new(LN_PI, 0.0) - ln_sin_pi_c(z) - ln_gamma_c(1.0 - z);
    }
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    let mut y = z;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    let tmp = z + LANCZOS_SHIFT;
    (z + 0.5) * tmp.ln() - tmp + (SQRT_2PI * ser / z).ln()
}

/// `ln(1/Γ(z))`; `None` at the poles of Γ where `1/Γ` vanishes.
pub fn ln_rgamma_c(z: Complex64) -> Option<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return None;
    }
    Some(-ln_gamma_c(z))
}

/// `ln sin(πz)` evaluated so that large `|Im z|` does not overflow.
pub fn ln_sin_pi_c(z: Complex64) -> Complex64 {
    if z.im.abs() < 5.0 {
        return (z * PI).sin().ln();
    }
    let flip = z.im < 0.0;
    let w = if flip { z.conj() } else { z };
    // sin(πw) = (i/2) e^{-iπw} (1 − e^{2iπw}) for Im w > 0
    let i = Complex64::i();
    let v = -i * PI * w + (1.0 - (2.0 * i * PI * w).exp()).ln()
        + Complex64::new(0.5f64.ln(), 0.5 * PI);
    if flip {
        v.conj()
    } else {
        v
    }
}

/// Error-free double-double value `hi + lo`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    #[inline]
    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    #[inline]
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = Self::two_sum(self.hi, o.hi);
        let (t, f) = Self::two_sum(self.lo, o.lo);
        let (s, e) = Self::quick_two_sum(s, e + t);
        let (hi, lo) = Self::quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn add_f64(self, o: f64) -> Self {
        self.add(Self::new(o))
    }

    pub fn mul(self, o: Self) -> Self {
        let (p, e) = Self::two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = Self::quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn mul_f64(self, o: f64) -> Self {
        let (p, e) = Self::two_prod(self.hi, o);
        let e = e + self.lo * o;
        let (hi, lo) = Self::quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul_f64(-q1));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul_f64(-q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = Self::quick_two_sum(q1, q2);
        Self { hi, lo }.add_f64(q3)
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            Self { hi: -self.hi, lo: -self.lo }
        } else {
            self
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
