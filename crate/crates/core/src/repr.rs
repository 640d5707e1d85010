//! Alternative integral representations of the extended beta k-function.
//!
//! Each variant is a change of variables in the defining integral. With
//! `a = s/k`, `b = t/k` and `K(w) = E(−v·w^k)`:
//!
//! | variant                  | value                                                                                  |
//! |--------------------------|----------------------------------------------------------------------------------------|
//! | `Direct`                 | `(1/k) ∫₀¹ m^{a−1}(1−m)^{b−1} K(m(1−m)) dm`                                            |
//! | `Trig`                   | `(2/k) ∫₀^{π/2} cos^{2a−1}j sin^{2b−1}j K(cos²j sin²j) dj`                              |
//! | `Power(n)`               | `(n/k) ∫₀¹ u^{na−1}(1−uⁿ)^{b−1} K(uⁿ(1−uⁿ)) du`                                        |
//! | `ScaledInterval(η)`      | `(1/k) η^{1−a−b} ∫₀^η u^{a−1}(η−u)^{b−1} K(u(η−u)/η²) du`                              |
//! | `RationalMap(η)`         | `(1/k)(1+η)^a η^b ∫₀¹ u^{a−1}(1−u)^{b−1}(u+η)^{−a−b} K(η(1+η)u(1−u)/(u+η)²) du`        |
//! | `HalfLine`               | `(1/k) ∫₀^∞ u^{a−1}(1+u)^{−a−b} K(u/(1+u)²) du`                                        |
//! | `SymmetrizedHalfLine`    | mean of `HalfLine` at `(s, t)` and `(t, s)`                                            |
//! | `ScaledHalfLine(η, ζ)`   | `(1/k) η^a ζ^b ∫₀^∞ u^{a−1}(ζ+ηu)^{−a−b} K(ηζu/(ζ+ηu)²) du`                            |
//! | `TanSquared(η, ζ)`       | `(2/k) η^a ζ^b ∫₀^{π/2} sin^{2a−1}j cos^{2b−1}j D^{−a−b} K(ηζ sin²j cos²j/D²) dj`, `D = ζcos²j + η sin²j` |
//! | `TwoParameter(η, ζ)`     | `(1/k) ζ^a η^b ∫₀¹ u^{a−1}(1−u)^{b−1} D^{−a−b} K(ηζu(1−u)/D²) du`, `D = η + (ζ−η)u`    |
//! | `ShiftedTwoParameter(ζ, ξ)` | `(1/k)(ζ+ξ)^a ζ^b ∫₀¹ u^{a−1}(1−u)^{b−1} D^{−a−b} K((ζ+ξ)ζu(1−u)/D²) du`, `D = ζ + ξu` |
//! | `Interval(η, ζ)`         | `(1/k)(ζ−η)^{1−a−b} ∫_η^ζ (u−η)^{a−1}(ζ−u)^{b−1} K((u−η)(ζ−u)/(ζ−η)²) du`             |
//! | `SymmetricInterval`      | `Interval(−1, 1)`                                                                      |
//!
//! [`paper_literal_representation`] evaluates the forms as originally
//! printed, including their misprints, so each misprint's effect can be
//! measured.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extfun::{extended_beta_with, evaluator, ExtBetaArgs, Kernel, Trap};
use crate::kcore::{MLParams, MittagLeffler};
use crate::quad::{self,
    integrate_01_split, integrate_0inf, integrate_interval_with, EvalResult, HalfLine, IntervalPoint,
    QuadConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Representation {
    Direct,
    Trig,
    Power { n: u32 },
    ScaledInterval { eta: f64 },
    RationalMap { eta: f64 },
    HalfLine,
    SymmetrizedHalfLine,
    ScaledHalfLine { eta: f64, zeta: f64 },
    TanSquared { eta: f64, zeta: f64 },
    TwoParameter { eta: f64, zeta: f64 },
    ShiftedTwoParameter { zeta: f64, xi: f64 },
    Interval { eta: f64, zeta: f64 },
    SymmetricInterval,
}

impl Representation {
    /// The twelve alternative forms with their default free parameters.
    pub fn alternatives() -> Vec<Representation> {
        use Representation::*;
        vec![
            Trig,
            Power { n: 2 },
            ScaledInterval { eta: 4.0 },
            RationalMap { eta: 1.5 },
            HalfLine,
            SymmetrizedHalfLine,
            ScaledHalfLine { eta: 2.0, zeta: 3.0 },
            TanSquared { eta: 2.0, zeta: 3.0 },
            TwoParameter { eta: 2.0, zeta: 3.0 },
            ShiftedTwoParameter { zeta: 2.0, xi: 1.5 },
            Interval { eta: 2.0, zeta: 7.0 },
            SymmetricInterval,
        ]
    }

    /// Families of the same form under different free parameters; every
    /// member of a family must give the same value.
    pub fn parameter_families() -> Vec<Vec<Representation>> {
        use Representation::*;
        let pairs = [(1.0, 1.0), (2.0, 3.0), (0.5, 5.0)];
        vec![
            [1, 2, 3, 5].iter().map(|&n| Power { n }).collect(),
            [0.5, 1.0, 4.0].iter().map(|&eta| ScaledInterval { eta }).collect(),
            [0.5, 1.0, 4.0].iter().map(|&eta| RationalMap { eta }).collect(),
            pairs.iter().map(|&(eta, zeta)| ScaledHalfLine { eta, zeta }).collect(),
            pairs.iter().map(|&(eta, zeta)| TanSquared { eta, zeta }).collect(),
            pairs.iter().map(|&(eta, zeta)| TwoParameter { eta, zeta }).collect(),
            [(1.0, 0.0), (2.0, 1.5), (3.0, -1.0)]
                .iter()
                .map(|&(zeta, xi)| ShiftedTwoParameter { zeta, xi })
                .collect(),
            [(0.0, 1.0), (-1.0, 1.0), (2.0, 7.0)]
                .iter()
                .map(|&(eta, zeta)| Interval { eta, zeta })
                .collect(),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        use Representation::*;
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive, got {x}")))
            }
        };
        match *self {
            Power { n } if n == 0 => Err(Error::Domain("power n must be at least 1".into())),
            ScaledInterval { eta } | RationalMap { eta } => positive("eta", eta),
            ScaledHalfLine { eta, zeta } | TanSquared { eta, zeta } | TwoParameter { eta, zeta } => {
                positive("eta", eta)?;
                positive("zeta", zeta)
            }
            ShiftedTwoParameter { zeta, xi } => {
                positive("zeta", zeta)?;
                positive("zeta + xi", zeta + xi)
            }
            Interval { eta, zeta } => {
                if eta < zeta && eta.is_finite() && zeta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("interval needs eta < zeta, got [{eta}, {zeta}]")))
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Representation::*;
        match *self {
            Direct => write!(f, "direct"),
            Trig => write!(f, "trig"),
            Power { n } => write!(f, "power(n={n})"),
            ScaledInterval { eta } => write!(f, "scaled_interval(eta={eta})"),
            RationalMap { eta } => write!(f, "rational_map(eta={eta})"),
            HalfLine => write!(f, "half_line"),
            SymmetrizedHalfLine => write!(f, "symmetrized_half_line"),
            ScaledHalfLine { eta, zeta } => write!(f, "scaled_half_line(eta={eta},zeta={zeta})"),
            TanSquared { eta, zeta } => write!(f, "tan_squared(eta={eta},zeta={zeta})"),
            TwoParameter { eta, zeta } => write!(f, "two_parameter(eta={eta},zeta={zeta})"),
            ShiftedTwoParameter { zeta, xi } => {
                write!(f, "shifted_two_parameter(zeta={zeta},xi={xi})")
            }
            Interval { eta, zeta } => write!(f, "interval(eta={eta},zeta={zeta})"),
            SymmetricInterval => write!(f, "symmetric_interval"),
        }
    }
}

/// Parses the [`Display`](fmt::Display) form; a bare name such as `power`
/// takes the default free parameters, and listed keys override them.
impl std::str::FromStr for Representation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, args) = match text.split_once('(') {
            Some((n, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Domain(format!("unbalanced parentheses in '{text}'")))?;
                (n.trim(), inner)
            }
            None => (text, ""),
        };
        let mut rep = std::iter::once(Representation::Direct)
            .chain(Representation::alternatives())
            .find(|r| r.to_string().split('(').next() == Some(name))
            .ok_or_else(|| Error::Domain(format!("unknown representation '{name}'")))?;
        for pair in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("expected key=value, got '{pair}'")))?;
            let x: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("'{value}' is not a number")))?;
            use Representation::*;
            let slot = match (&mut rep, key.trim()) {
                (Power { n }, "n") => {
                    if !(x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64) {
                        return Err(Error::Domain(format!("n = {x} must be a positive integer")));
                    }
                    *n = x as u32;
                    continue;
                }
                (ScaledInterval { eta } | RationalMap { eta }, "eta") => eta,
                (ScaledHalfLine { eta, .. } | TanSquared { eta, .. } | TwoParameter { eta, .. } | Interval { eta, .. }, "eta") => eta,
                (ScaledHalfLine { zeta, .. } | TanSquared { zeta, .. } | TwoParameter { zeta, .. } | Interval { zeta, .. }, "zeta") => zeta,
                (ShiftedTwoParameter { zeta, .. }, "zeta") => zeta,
                (ShiftedTwoParameter { xi, .. }, "xi") => xi,
                (_, other) => return Err(Error::Domain(format!("'{name}' has no parameter '{other}'"))),
            };
            *slot = x;
        }
        rep.validate()?;
        Ok(rep)
    }
}

/// `base^e` for real results only: negative bases need integer exponents.
fn real_pow(base: f64, e: f64) -> f64 {
    if base >= 0.0 {
        base.powf(e)
    } else if e.fract() == 0.0 {
        let mag = (-base).powf(e);
        if (e as i64) % 2 == 0 {
            mag
        } else {
            -mag
        }
    } else {
        f64::NAN
    }
}

/// `(sin x / x)^e`, continuous at 0.
fn sinc_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (x.sin() / x).powf(e)
    }
}

/// Quadrature of the trigonometric forms on `[0, π/2]`, absorbing
/// `j^{alpha}` and `(π/2 − j)^{beta}`. `f` gets `(sin j, cos j)` plus the
/// two smooth correction ratios already applied.
fn trig_integral(
    f: impl Fn(f64, f64) -> f64,
    alpha: f64,
    beta: f64,
    qcfg: &QuadConfig,
) -> Result<EvalResult> {
    integrate_interval_with(
        |pt: IntervalPoint| {
            let (sj, cj) = (pt.from_a.sin(), pt.to_b.sin());
            sinc_pow(pt.from_a, alpha) * sinc_pow(pt.to_b, beta) * f(sj, cj)
        },
        0.0,
        FRAC_PI_2,
        alpha,
        beta,
        qcfg,
    )
}

/// `(1 − uⁿ)/(1 − u)` from `u` and `1 − u`.
fn power_ratio(u: f64, uc: f64, n: u32) -> f64 {
    if n == 1 || uc == 0.0 {
        return n as f64;
    }
    let one_minus = if u > 0.5 { -(n as f64 * (-uc).ln_1p()).exp_m1() } else { 1.0 - u.powi(n as i32) };
    one_minus / uc
}

struct Ctx<'a> {
    args: ExtBetaArgs,
    a: f64,
    b: f64,
    k: f64,
    kernel: Kernel<'a>,
    trap: Trap,
}

impl<'a> Ctx<'a> {
    fn new(args: ExtBetaArgs, ml: &'a MittagLeffler) -> Self {
        let k = ml.params().k();
        Self {
            args,
            a: args.s / k,
            b: args.t / k,
            k,
            kernel: Kernel::new(ml, args.v),
            trap: Trap::default(),
        }
    }

    fn kern(&self, w: f64) -> f64 {
        self.trap.catch(self.kernel.eval(w))
    }

    fn done(self, r: Result<EvalResult>, prefactor: f64) -> Result<EvalResult> {
        Ok(self.trap.finish(r)?.scaled(prefactor))
    }
}

/// `(1/k) ∫₀^∞ u^{a−1}(1+u)^{−a−b} K(u/(1+u)²) du`.
fn half_line(ctx: &Ctx, a: f64, b: f64, qcfg: &QuadConfig) -> Result<EvalResult> {
    let shape = HalfLine { origin_exponent: a - 1.0, decay: Some(b + 1.0) };
    integrate_0inf(
        |u| {
            let lp = u.ln_1p();
            (-(a + b) * lp).exp() * ctx.kern(u / (1.0 + u) / (1.0 + u))
        },
        shape,
        qcfg,
    )
}

/// Evaluates the selected representation.
pub fn eval_representation(
    rep: Representation,
    args: ExtBetaArgs,
    params: &MLParams,
    qcfg: &QuadConfig,
) -> Result<EvalResult> {
    eval_representation_with(rep, args, &evaluator(params)?, qcfg)
}

pub fn eval_representation_with(
    rep: Representation,
    args: ExtBetaArgs,
    ml: &MittagLeffler,
    qcfg: &QuadConfig,
) -> Result<EvalResult> {
    use Representation::*;
    rep.validate()?;
    args.validate()?;
    let ctx = Ctx::new(args, ml);
    let (a, b, k) = (ctx.a, ctx.b, ctx.k);
    match rep {
        Direct => extended_beta_with(args, ml, qcfg),
        Trig => {
            let r = trig_integral(|sj, cj| ctx.kern(cj * cj * sj * sj), 2.0 * b - 1.0, 2.0 * a - 1.0, qcfg);
            ctx.done(r, 2.0 / k)
        }
        Power { n } => {
            let r = integrate_01_split(
                |u, uc| {
                    let un = u.powi(n as i32);
                    let ratio = power_ratio(u, uc, n);
                    ratio.powf(b - 1.0) * ctx.kern(un * ratio * uc)
                },
                n as f64 * a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, n as f64 / k)
        }
        ScaledInterval { eta } => {
            let r = integrate_interval_with(
                |pt| ctx.kern(pt.from_a / eta * (pt.to_b / eta)),
                0.0,
                eta,
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, eta.powf(1.0 - a - b) / k)
        }
        RationalMap { eta } => {
            let r = integrate_01_split(
                |u, uc| {
                    let d = u + eta;
                    d.powf(-a - b) * ctx.kern(eta * (1.0 + eta) * u * uc / (d * d))
                },
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, (1.0 + eta).powf(a) * eta.powf(b) / k)
        }
        HalfLine => {
            let r = half_line(&ctx, a, b, qcfg);
            ctx.done(r, 1.0 / k)
        }
        SymmetrizedHalfLine => {
            let r = half_line(&ctx, a, b, qcfg)
                .and_then(|first| Ok(first.plus(&half_line(&ctx, b, a, qcfg)?)));
            ctx.done(r, 0.5 / k)
        }
        ScaledHalfLine { eta, zeta } => {
            let shape = quad::HalfLine { origin_exponent: a - 1.0, decay: Some(b + 1.0) };
            let r = integrate_0inf(
                |u| {
                    let d = zeta + eta * u;
                    d.powf(-a - b) * ctx.kern(eta * zeta * u / (d * d))
                },
                shape,
                qcfg,
            );
            ctx.done(r, eta.powf(a) * zeta.powf(b) / k)
        }
        TanSquared { eta, zeta } => {
            let r = trig_integral(
                |sj, cj| {
                    let (s2, c2) = (sj * sj, cj * cj);
                    let d = zeta * c2 + eta * s2;
                    d.powf(-a - b) * ctx.kern(eta * zeta * s2 * c2 / (d * d))
                },
                2.0 * a - 1.0,
                2.0 * b - 1.0,
                qcfg,
            );
            ctx.done(r, 2.0 * eta.powf(a) * zeta.powf(b) / k)
        }
        TwoParameter { eta, zeta } => {
            let r = integrate_01_split(
                |u, uc| {
                    let d = eta * uc + zeta * u;
                    d.powf(-a - b) * ctx.kern(eta * zeta * u * uc / (d * d))
                },
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, zeta.powf(a) * eta.powf(b) / k)
        }
        ShiftedTwoParameter { zeta, xi } => {
            let eta = zeta + xi;
            let r = integrate_01_split(
                |u, uc| {
                    let d = zeta * uc + eta * u;
                    d.powf(-a - b) * ctx.kern(eta * zeta * u * uc / (d * d))
                },
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, eta.powf(a) * zeta.powf(b) / k)
        }
        Interval { eta, zeta } => {
            let len = zeta - eta;
            let r = integrate_interval_with(
                |pt| ctx.kern(pt.from_a / len * (pt.to_b / len)),
                eta,
                zeta,
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, len.powf(1.0 - a - b) / k)
        }
        SymmetricInterval => {
            let r = integrate_interval_with(
                |pt| ctx.kern(pt.from_a * pt.to_b / 4.0),
                -1.0,
                1.0,
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, 2f64.powf(1.0 - a - b) / k)
        }
    }
}

/// Evaluates the representation exactly as originally printed.
///
/// Where the printed form differs from [`eval_representation`]:
///
/// * `Power`: no `u^{n−1}` Jacobian, so the weight at 0 is `u^{n(a−1)}`.
/// * `RationalMap`: prefactor `(1+η)^{a−1} η^{b−1}`, the constant `(t+η)^{−a−b}`
///   in place of `(u+η)^{−a−b}`, and `K(η(1+η)u(1−u)/(u+η²))`.
/// * `TanSquared`: denominator `cos²j + η sin²j`; the stray `u` in the
///   kernel argument is read as 1.
/// * `TwoParameter`: `D = ζ + (η−ζ)u` in place of `η + (ζ−η)u`.
/// * `ShiftedTwoParameter`: no `1/k`, and `(η − ξu)²` with `η = ζ + ξ` in
///   the kernel argument.
/// * `Interval`: no `1/k`, and `(η−u)^{b−1}` in place of `(ζ−u)^{b−1}`; the
///   value is not real unless `b` is an integer, which yields a
///   non-finite integrand diagnostic.
/// * `SymmetricInterval`: no `1/k`.
///
/// The remaining forms were printed correctly (the trigonometric form once
/// its missing argument `j` is supplied) and coincide with
/// [`eval_representation`].
pub fn paper_literal_representation(
    rep: Representation,
    args: ExtBetaArgs,
    params: &MLParams,
    qcfg: &QuadConfig,
) -> Result<EvalResult> {
    paper_literal_representation_with(rep, args, &evaluator(params)?, qcfg)
}

pub fn paper_literal_representation_with(
    rep: Representation,
    args: ExtBetaArgs,
    ml: &MittagLeffler,
    qcfg: &QuadConfig,
) -> Result<EvalResult> {
    use Representation::*;
    rep.validate()?;
    args.validate()?;
    let ctx = Ctx::new(args, ml);
    let (a, b, k) = (ctx.a, ctx.b, ctx.k);
    match rep {
        Power { n } => {
            let r = integrate_01_split(
                |u, uc| {
                    let un = u.powi(n as i32);
                    let ratio = power_ratio(u, uc, n);
                    ratio.powf(b - 1.0) * ctx.kern(un * ratio * uc)
                },
                n as f64 * (a - 1.0),
                b - 1.0,
                qcfg,
            );
            ctx.done(r, n as f64 / k)
        }
        RationalMap { eta } => {
            let r = integrate_01_split(
                |u, uc| ctx.kern(eta * (1.0 + eta) * u * uc / (u + eta * eta)),
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            let pre = (1.0 + eta).powf(a - 1.0) * eta.powf(b - 1.0) * (ctx.args.t + eta).powf(-a - b);
            ctx.done(r, pre / k)
        }
        TanSquared { eta, zeta } => {
            let r = trig_integral(
                |sj, cj| {
                    let (s2, c2) = (sj * sj, cj * cj);
                    let d = zeta * c2 + eta * s2;
                    (c2 + eta * s2).powf(-a - b) * ctx.kern(eta * zeta * s2 * c2 / (d * d))
                },
                2.0 * a - 1.0,
                2.0 * b - 1.0,
                qcfg,
            );
            ctx.done(r, 2.0 * eta.powf(a) * zeta.powf(b) / k)
        }
        TwoParameter { eta, zeta } => {
            let r = integrate_01_split(
                |u, uc| {
                    let d = zeta * uc + eta * u;
                    d.powf(-a - b) * ctx.kern(eta * zeta * u * uc / (d * d))
                },
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, zeta.powf(a) * eta.powf(b) / k)
        }
        ShiftedTwoParameter { zeta, xi } => {
            let eta = zeta + xi;
            let r = integrate_01_split(
                |u, uc| {
                    let d = zeta * uc + eta * u;
                    let e = eta - xi * u;
                    d.powf(-a - b) * ctx.kern(eta * zeta * u * uc / (e * e))
                },
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, eta.powf(a) * zeta.powf(b))
        }
        Interval { eta, zeta } => {
            let len = zeta - eta;
            let r = integrate_interval_with(
                |pt| {
                    let printed = real_pow(eta - pt.u, b - 1.0) / pt.to_b.powf(b - 1.0);
                    printed * ctx.kern(pt.from_a / len * (pt.to_b / len))
                },
                eta,
                zeta,
                a - 1.0,
                b - 1.0,
                qcfg,
            );
            ctx.done(r, len.powf(1.0 - a - b))
        }
        SymmetricInterval => {
            drop(ctx);
            Ok(eval_representation_with(rep, args, ml, qcfg)?.scaled(k))
        }
        _ => {
            drop(ctx);
            eval_representation_with(rep, args, ml, qcfg)
        }
    }
}
