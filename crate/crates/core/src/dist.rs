//! The generalized beta distribution on `(0, 1)` with density
//! `x^{s/k−1} (1−x)^{t/k−1} E_{k,p,q}^l(−v x^k (1−x)^k) / (k β^{p,q}_{k,v,l}(s, t))`.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extfun::{evaluator, extended_beta_with, incomplete_extended_beta_with, ExtBetaArgs, Kernel, Trap};
use crate::kcore::{GammaMode, MLParams, MittagLeffler};
use crate::quad::{integrate_interval, integrate_interval_with, QuadConfig};

/// Points of the construction-time density sign check.
pub const SIGN_CHECK_POINTS: usize = 1024;
/// Largest `|y|` accepted by [`GeneralizedBeta::mgf`].
pub const MGF_MAX_ABS_ARGUMENT: f64 = 20.0;
/// Target for `|cdf(x) − u|` in [`GeneralizedBeta::quantile`].
pub const QUANTILE_TOLERANCE: f64 = 1e-10;
const QUANTILE_MAX_ITERATIONS: usize = 200;
const CDF_SEGMENTS: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistParams {
    pub s: f64,
    pub t: f64,
    pub v: f64,
    /// Upper index of the Mittag-Leffler factor.
    pub l: f64,
    pub p: f64,
    pub q: f64,
    pub k: f64,
    pub mode: GammaMode,
}

impl DistParams {
    /// `s = t = k = p = q = l = 1`, `v = 0`: the uniform distribution.
    pub fn uniform() -> Self {
        Self { s: 1.0, t: 1.0, v: 0.0, l: 1.0, p: 1.0, q: 1.0, k: 1.0, mode: GammaMode::ClassicalGamma }
    }

    pub fn ml_params(&self) -> Result<MLParams> {
        MLParams::new(self.k, self.p, self.q, self.l, self.mode)
    }
}

/// Cumulative probabilities at `i / CDF_SEGMENTS`.
#[derive(Debug)]
struct CdfTable {
    cum: Vec<f64>,
}

#[derive(Debug)]
pub struct GeneralizedBeta {
    params: DistParams,
    ml: MittagLeffler,
    qcfg: QuadConfig,
    norm: f64,
    table: OnceLock<CdfTable>,
}

impl GeneralizedBeta {
    pub fn new(params: DistParams) -> Result<Self> {
        Self::with_config(params, QuadConfig::default())
    }

    /// Validates the parameters, checks the density sign on a grid, and
    /// computes the normalizer.
    pub fn with_config(params: DistParams, qcfg: QuadConfig) -> Result<Self> {
        qcfg.validate()?;
        let args = ExtBetaArgs::new(params.s, params.t, params.v)?;
        let ml = evaluator(&params.ml_params()?)?;
        let kernel = Kernel::new(&ml, params.v);
        for i in 0..SIGN_CHECK_POINTS {
            let x = (i as f64 + 0.5) / SIGN_CHECK_POINTS as f64;
            let e = kernel.eval(x * (1.0 - x))?;
            if !(e >= 0.0) {
                return Err(Error::Domain(format!(
                    "density is negative at x = {x} (Mittag-Leffler factor {e:e}); reduce v"
                )));
            }
        }
        let beta = extended_beta_with(args, &ml, &qcfg)?;
        if !beta.converged {
            return Err(Error::Numeric(format!("normalizer did not converge: {:?}", beta.diagnostics)));
        }
        if !(beta.value > 0.0) {
            return Err(Error::Domain(format!("normalizer {} is not positive", beta.value)));
        }
        Ok(Self { params, ml, qcfg, norm: beta.value, table: OnceLock::new() })
    }

    pub fn params(&self) -> &DistParams {
        &self.params
    }

    /// `β^{p,q}_{k,v,l}(s, t)`.
    pub fn normalizer(&self) -> f64 {
        self.norm
    }

    fn a(&self) -> f64 {
        self.params.s / self.params.k
    }

    fn b(&self) -> f64 {
        self.params.t / self.params.k
    }

    fn kernel(&self) -> Kernel<'_> {
        Kernel::new(&self.ml, self.params.v)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < 1.0) {
            return 0.0;
        }
        let e = self.kernel().eval(x * (1.0 - x)).unwrap_or(f64::NAN);
        x.powf(self.a() - 1.0) * (1.0 - x).powf(self.b() - 1.0) * e / (self.params.k * self.norm)
    }

    fn beta_at(&self, s: f64) -> Result<f64> {
        let args = ExtBetaArgs::new(s, self.params.t, self.params.v)?;
        let r = extended_beta_with(args, &self.ml, &self.qcfg)?;
        if !r.converged {
            return Err(Error::Numeric(format!("β(s = {s}) did not converge: {:?}", r.diagnostics)));
        }
        Ok(r.value)
    }

    /// `E[X^r] = β(s + r·k, t) / β(s, t)`.
    pub fn moment(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("moment order r = {r} must be finite and nonnegative")));
        }
        if r == 0.0 {
            return Ok(1.0);
        }
        Ok(self.beta_at(self.params.s + r * self.params.k)? / self.norm)
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(1.0)
    }

    /// `(β(s+2k) β(s) − β(s+k)²) / β(s)²`, with round-off above `−1e-12`
    /// clipped to zero.
    pub fn variance(&self) -> Result<f64> {
        let m1 = self.moment(1.0)?;
        let m2 = self.moment(2.0)?;
        let var = m2 - m1 * m1;
        if var >= 0.0 {
            Ok(var)
        } else if var >= -1e-12 {
            Ok(0.0)
        } else {
            Err(Error::Numeric(format!("variance {var:e} is negative beyond round-off")))
        }
    }

    /// `Σ_f β(s + f·k, t) y^f / (f! β(s, t))`, truncated once a term drops
    /// below `1e-15` of the partial sum.
    pub fn mgf(&self, y: f64, max_terms: usize) -> Result<f64> {
        if !(y.abs() <= MGF_MAX_ABS_ARGUMENT) {
            return Err(Error::ArgumentRange { x: y, max: MGF_MAX_ABS_ARGUMENT });
        }
        if y == 0.0 {
            return Ok(1.0);
        }
        let mut sum = 1.0;
        let mut coeff = 1.0;
        for f in 1..=max_terms {
            coeff *= y / f as f64;
            let term = coeff * self.moment(f as f64)?;
            sum += term;
            if term.abs() < 1e-15 * sum.abs() {
                return Ok(sum);
            }
        }
        Err(Error::Convergence { partial: sum, terms: max_terms })
    }

    /// `P(X ≤ y)` from the incomplete extended beta function.
    pub fn cdf(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        if y >= 1.0 {
            return Ok(1.0);
        }
        let args = ExtBetaArgs::new(self.params.s, self.params.t, self.params.v)?;
        let r = incomplete_extended_beta_with(y, args, &self.ml, &self.qcfg)?;
        Ok((r.value / self.norm).clamp(0.0, 1.0))
    }

    /// Unnormalized density without the power factors selected by the flags,
    /// which the quadrature then carries as endpoint weights.
    fn density_core(&self, u: f64, with_left: bool, with_right: bool, trap: &Trap) -> f64 {
        let mut v = trap.catch(self.kernel().eval(u * (1.0 - u)));
        if with_left {
            v *= u.powf(self.a() - 1.0);
        }
        if with_right {
            v *= (1.0 - u).powf(self.b() - 1.0);
        }
        v
    }

    /// Probability mass on `[lo, hi]` with `hi` inside segment `seg`.
    fn segment_mass(&self, seg: usize, lo: f64, hi: f64) -> Result<f64> {
        if hi <= lo {
            return Ok(0.0);
        }
        let trap = Trap::default();
        let scale = 1.0 / (self.params.k * self.norm);
        let r = if seg == 0 {
            let r = integrate_interval(|u| self.density_core(u, false, true, &trap), lo, hi, self.a() - 1.0, 0.0, &self.qcfg);
            trap.finish(r)?
        } else if seg == CDF_SEGMENTS - 1 && hi == 1.0 {
            let r = integrate_interval_with(
                |pt| trap.catch(self.kernel().eval(pt.u * pt.to_b)) * pt.u.powf(self.a() - 1.0),
                lo,
                hi,
                0.0,
                self.b() - 1.0,
                &self.qcfg,
            );
            trap.finish(r)?
        } else {
            let r = integrate_interval(|u| self.density_core(u, true, true, &trap), lo, hi, 0.0, 0.0, &self.qcfg);
            trap.finish(r)?
        };
        Ok(r.value * scale)
    }

    fn table(&self) -> Result<&CdfTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let n = CDF_SEGMENTS as f64;
        let masses: Vec<f64> = (0..CDF_SEGMENTS)
            .map(|i| self.segment_mass(i, i as f64 / n, (i + 1) as f64 / n))
            .collect::<Result<_>>()?;
        let mut cum = Vec::with_capacity(CDF_SEGMENTS + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for m in masses {
            acc += m;
            cum.push(acc);
        }
        Ok(self.table.get_or_init(|| CdfTable { cum }))
    }

    /// CDF at `x` inside segment `seg`; the last segment is measured from
    /// the right end so its endpoint singularity stays at an endpoint.
    fn cdf_in_segment(&self, seg: usize, x: f64, table: &CdfTable) -> Result<f64> {
        let n = CDF_SEGMENTS as f64;
        if seg == CDF_SEGMENTS - 1 {
            return Ok(1.0 - self.segment_mass(seg, x, 1.0)?);
        }
        Ok(table.cum[seg] + self.segment_mass(seg, seg as f64 / n, x)?)
    }

    /// Solves `cdf(x) = u` to `|cdf(x) − u| ≤ 1e-10` by Newton steps
    /// safeguarded by bisection inside the bracketing table segment.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level u = {u} must lie in (0, 1)")));
        }
        let table = self.table()?;
        let seg = table.cum[1..CDF_SEGMENTS].partition_point(|&c| c < u);
        let n = CDF_SEGMENTS as f64;
        let (mut lo, mut hi) = (seg as f64 / n, (seg + 1) as f64 / n);
        let (c0, c1) = (table.cum[seg], table.cum[seg + 1]);
        let mut x = if c1 > c0 { lo + (hi - lo) * ((u - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { 0.5 * (lo + hi) };
        for _ in 0..QUANTILE_MAX_ITERATIONS {
            let f = self.cdf_in_segment(seg, x, table)? - u;
            if f.abs() <= QUANTILE_TOLERANCE {
                return Ok(x);
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= f64::EPSILON * hi {
                return Ok(x);
            }
            let d = self.pdf(x);
            let newton = x - f / d;
            x = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        Err(Error::Numeric(format!(
            "quantile at u = {u} did not converge in {QUANTILE_MAX_ITERATIONS} iterations"
        )))
    }

    /// `n` draws by inverse CDF from a ChaCha stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let us: Vec<f64> = (0..n)
            .map(|_| loop {
                let u: f64 = rng.gen();
                if u > 0.0 {
                    break u;
                }
            })
            .collect();
        self.table()?;
        us.into_par_iter().map(|u| self.quantile(u)).collect()
    }
}
